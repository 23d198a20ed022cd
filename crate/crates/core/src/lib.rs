//! Petz recovery maps for qubit noise channels.
//!
//! The numerical core is generic over the real scalar type ([`Real`], i.e.
//! `f32` or `f64`); the aliases at the crate root fix it to `f64`, which is
//! what the experiments and the CLI use.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod nonmarkov;
pub mod petz;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = linalg::ComplexMatrix<f64>;
pub type State = linalg::DensityMatrix<f64>;
pub type Channel = channels::QuantumChannel<f64>;
pub type Kraus = channels::KrausMap<f64>;
pub type Petz = petz::PetzMap<f64>;
pub type Reference = petz::ReferenceState<f64>;
pub type Strategy = petz::RecoveryStrategy<f64>;
pub type Estimate = sampling::FidelityEstimate<f64>;
pub type Sweep = sampling::SweepTable<f64>;
pub type Dynamics = nonmarkov::DynamicsModel<f64>;
pub type Generator = nonmarkov::GeneratorModel<f64>;
pub type Point = nonmarkov::TrajectoryPoint<f64>;
