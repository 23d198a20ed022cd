//! Petz recovery maps and the fixed recovery strategies they are compared with.
//!
//! For a channel `Λ` with Kraus operators `K_i` and a reference state `σ`, the
//! Petz map has Kraus operators `σ^{1/2} K_i† Λ(σ)^{-1/2}`. When `Λ(σ)` is
//! singular the inverse square root is a pseudo-inverse, and the resulting map
//! is only trace preserving on the support of `Λ(σ)`. Outputs are never
//! renormalized, so the map stays linear.
//!
//! Reference states from the diagonal family `σ(q) = (1−q)|0⟩⟨0| + q|1⟩⟨1|`
//! are rank one at `q ∈ {0, 1}`. There [`ReferenceState::petz_map`] returns
//! the one-sided limit `q → 0⁺` (or `q → 1⁻`) of the family, evaluated at a
//! reference weight far below every other scale in the problem.

use std::fmt;

use crate::channels::{KrausMap, QuantumChannel};
use crate::error::{check_range, Error, Result};
use crate::linalg::{
    eig_hermitian, matrix_invsqrt_pinv_with_cutoff, matrix_sqrt, ComplexMatrix, DensityMatrix,
    PINV_RELATIVE_CUTOFF,
};
use crate::scalar::{tol, Real};

/// Petz recovery map together with a record of whether `Λ(σ)` had full rank.
#[derive(Debug, Clone)]
pub struct PetzMap<T> {
    map: KrausMap<T>,
    full_support: bool,
}

impl<T: Real> PetzMap<T> {
    pub fn map(&self) -> &KrausMap<T> {
        &self.map
    }

    pub fn into_map(self) -> KrausMap<T> {
        self.map
    }

    /// `false` when `Λ(σ)` was rank deficient and the map loses trace off its
    /// support.
    pub fn full_support(&self) -> bool {
        self.full_support
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        self.map.apply_state(rho)
    }
}

/// Petz map of `ch` with respect to `sigma`, using the pseudo-inverse
/// convention (relative cutoff `1e-12 · λ_max`) for a singular `Λ(σ)`.
pub fn petz_map<T: Real>(ch: &QuantumChannel<T>, sigma: &DensityMatrix<T>) -> Result<PetzMap<T>> {
    petz_with_cutoff(ch, sigma.matrix(), tol::<T>(PINV_RELATIVE_CUTOFF))
}

fn petz_with_cutoff<T: Real>(
    ch: &QuantumChannel<T>,
    sigma: &ComplexMatrix<T>,
    relative_cutoff: T,
) -> Result<PetzMap<T>> {
    if sigma.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: sigma.dim(),
        });
    }
    let image = ch.apply_operator(sigma)?.hermitian_part();
    let root = matrix_sqrt(sigma)?;
    let inv_root = matrix_invsqrt_pinv_with_cutoff(&image, relative_cutoff)?;

    let spectrum = eig_hermitian(&image)?;
    let cutoff = relative_cutoff * spectrum.max();
    let full_support = spectrum.values.iter().all(|&l| l > cutoff && l > T::zero());

    let kraus = ch
        .kraus()
        .iter()
        .map(|k| &(&root * &k.adjoint()) * &inv_root)
        .collect();
    Ok(PetzMap {
        map: KrausMap::new(format!("petz[{}]", ch.label()), kraus)?,
        full_support,
    })
}

/// Diagonal reference state `σ(q) = (1−q)|0⟩⟨0| + q|1⟩⟨1|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceState<T> {
    q: T,
}

impl<T: Real> ReferenceState<T> {
    pub fn new(q: T) -> Result<Self> {
        check_range("q", q.to_f64_lossy(), 0.0, 1.0)?;
        Ok(Self { q })
    }

    /// `q = 1/2`, the maximally mixed state.
    pub fn maximally_mixed() -> Self {
        Self { q: T::lit(0.5) }
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn state(&self) -> DensityMatrix<T> {
        DensityMatrix::new(ComplexMatrix::diag(&[T::one() - self.q, self.q]))
            .expect("diagonal weights in [0, 1]")
    }

    pub fn is_boundary(&self) -> bool {
        self.q <= T::zero() || self.q >= T::one()
    }

    /// Weight standing in for the vanishing population at `q ∈ {0, 1}`.
    fn boundary_weight() -> T {
        T::min_positive_value().sqrt()
    }

    /// Petz map for this reference state, continuous in `q` on all of `[0, 1]`.
    pub fn petz_map(&self, ch: &QuantumChannel<T>) -> Result<PetzMap<T>> {
        if ch.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: ch.dim(),
            });
        }
        if !self.is_boundary() {
            return petz_map(ch, &self.state());
        }
        let eps = Self::boundary_weight();
        let weights = if self.q <= T::zero() {
            [T::one(), eps]
        } else {
            [eps, T::one()]
        };
        petz_with_cutoff(
            ch,
            &ComplexMatrix::diag(&weights),
            tol::<T>(PINV_RELATIVE_CUTOFF) * eps,
        )
    }
}

impl<T: Real> fmt::Display for ReferenceState<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma(q={})", self.q)
    }
}

/// How the channel output is mapped back to a guess of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecoveryStrategy<T> {
    Petz(ReferenceState<T>),
    /// Return the channel output unchanged.
    Identity,
    /// Always return `I/2`.
    MaximallyMixed,
}

impl<T: Real> RecoveryStrategy<T> {
    pub fn name(&self) -> String {
        match self {
            RecoveryStrategy::Petz(r) => format!("petz(q={})", r.q()),
            RecoveryStrategy::Identity => "identity".into(),
            RecoveryStrategy::MaximallyMixed => "maximally_mixed".into(),
        }
    }

    /// Resolves the strategy against a channel once, for repeated use.
    pub fn prepare(&self, ch: &QuantumChannel<T>) -> Result<PreparedRecovery<T>> {
        Ok(match self {
            RecoveryStrategy::Petz(r) => PreparedRecovery::Map(r.petz_map(ch)?),
            RecoveryStrategy::Identity => PreparedRecovery::Identity,
            RecoveryStrategy::MaximallyMixed => {
                PreparedRecovery::Constant(DensityMatrix::maximally_mixed(ch.dim()).into_matrix())
            }
        })
    }
}

/// A [`RecoveryStrategy`] bound to a specific channel.
#[derive(Debug, Clone)]
pub enum PreparedRecovery<T> {
    Map(PetzMap<T>),
    Identity,
    Constant(ComplexMatrix<T>),
}

impl<T: Real> PreparedRecovery<T> {
    pub fn full_support(&self) -> bool {
        match self {
            PreparedRecovery::Map(m) => m.full_support(),
            _ => true,
        }
    }

    pub(crate) fn apply_operator(&self, out: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        match self {
            PreparedRecovery::Map(m) => Ok(m.map().apply_operator(out)?.hermitian_part()),
            PreparedRecovery::Identity => Ok(out.clone()),
            PreparedRecovery::Constant(c) => Ok(c.clone()),
        }
    }
}

/// Applies a recovery strategy to the output `rho_out` of `ch`.
pub fn recover<T: Real>(
    strategy: &RecoveryStrategy<T>,
    ch: &QuantumChannel<T>,
    rho_out: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let prepared = strategy.prepare(ch)?;
    DensityMatrix::subnormalized(prepared.apply_operator(rho_out.matrix())?)
}
