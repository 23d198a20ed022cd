//! Dense complex linear algebra for qubit operators and their Choi matrices.

mod eig;
mod functions;
mod matrix;
mod metrics;
mod state;

pub use eig::{eig_hermitian, Eigen, JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE};
pub use functions::{
    matrix_invsqrt_pinv, matrix_invsqrt_pinv_with_cutoff, matrix_sqrt, support_projector,
    NEGATIVE_CLAMP, PINV_RELATIVE_CUTOFF,
};
pub use matrix::ComplexMatrix;
pub(crate) use metrics::fidelity_with_root;
pub use metrics::{fidelity, relative_entropy, trace_distance, trace_norm};
pub use state::{DensityMatrix, ROUNDOFF_NEGATIVE};
