use std::ops::Deref;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix};
use crate::scalar::{tol, Real};

/// Trace-preservation tolerance `‖Σ K†K − I‖_max`.
pub const TP_TOLERANCE: f64 = 1e-10;

/// Superoperators closer than this (max-abs entry) are the same map.
pub const MAP_EQUALITY_TOLERANCE: f64 = 1e-10;

/// Completely positive map `ω ↦ Σ K ω K†`, not necessarily trace preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap<T> {
    label: String,
    kraus: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausMap<T> {
    pub fn new(label: impl Into<String>, kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyChannel)?;
        let dim = first.dim();
        if let Some(bad) = kraus.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self {
            label: label.into(),
            kraus,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            })
        }
    }

    /// `Σ K ω K†` on an arbitrary operator.
    pub fn apply_operator(&self, omega: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.check_dim(omega.dim())?;
        let mut out = ComplexMatrix::zeros(self.dim());
        for k in &self.kraus {
            out = &out + &k.sandwich(omega);
        }
        Ok(out)
    }

    /// Image of a state. Trace-decreasing maps yield subnormalized states.
    pub fn apply_state(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        DensityMatrix::subnormalized(self.apply_operator(rho.matrix())?.hermitian_part())
    }

    /// `Σ K† K`.
    pub fn effect_sum(&self) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim());
        for k in &self.kraus {
            out = &out + &(&k.adjoint() * k);
        }
        out
    }

    pub fn trace_preservation_error(&self) -> T {
        self.effect_sum()
            .max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preservation_error() <= tol::<T>(TP_TOLERANCE)
    }

    /// Trace-dual `ω ↦ Σ K† ω K`.
    pub fn dual(&self) -> KrausMap<T> {
        KrausMap {
            label: format!("dual({})", self.label),
            kraus: self.kraus.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    /// Matrix `M` with `vec(Λ(ρ)) = M vec(ρ)` under column stacking,
    /// i.e. `Σ conj(K) ⊗ K`.
    pub fn superoperator(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d * d);
        for k in &self.kraus {
            let conj = ComplexMatrix::from_fn(d, |i, j| k[(i, j)].conj());
            out = &out + &conj.kron(k);
        }
        out
    }

    /// Max-abs distance between superoperators.
    pub fn superoperator_distance(&self, other: &KrausMap<T>) -> Result<T> {
        self.check_dim(other.dim())?;
        Ok(self.superoperator().max_abs_diff(&other.superoperator()))
    }

    pub fn same_map(&self, other: &KrausMap<T>) -> bool {
        matches!(self.superoperator_distance(other), Ok(d) if d <= tol::<T>(MAP_EQUALITY_TOLERANCE))
    }

    /// Choi state `(1 ⊗ Λ)(|Ω⟩⟨Ω|)` with `|Ω⟩ = Σ|ii⟩/√d`.
    pub fn choi(&self) -> ChoiMatrix<T> {
        let d = self.dim();
        let norm = T::one() / T::lit(d as f64);
        let mut mat = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut unit = ComplexMatrix::zeros(d);
                unit[(i, j)] = Complex::new(T::one(), T::zero());
                let image = self.apply_operator(&unit).expect("dimension checked");
                for a in 0..d {
                    for b in 0..d {
                        mat[(i * d + a, j * d + b)] = image[(a, b)] * norm;
                    }
                }
            }
        }
        ChoiMatrix { mat }
    }
}

/// Kraus map that satisfies `Σ K†K = I` within [`TP_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel<T>(KrausMap<T>);

impl<T: Real> QuantumChannel<T> {
    pub fn new(label: impl Into<String>, kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        Self::from_map(KrausMap::new(label, kraus)?)
    }

    pub fn from_map(map: KrausMap<T>) -> Result<Self> {
        let err = map.trace_preservation_error();
        if err > tol::<T>(TP_TOLERANCE) {
            return Err(Error::NotTracePreserving {
                deviation: err.to_f64_lossy(),
            });
        }
        Ok(Self(map))
    }

    pub fn identity(dim: usize) -> Self {
        Self(KrausMap {
            label: "identity".into(),
            kraus: vec![ComplexMatrix::identity(dim)],
        })
    }

    pub fn as_map(&self) -> &KrausMap<T> {
        &self.0
    }

    pub fn into_map(self) -> KrausMap<T> {
        self.0
    }

    pub fn with_label(self, label: impl Into<String>) -> Self {
        Self(self.0.with_label(label))
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        self.0.check_dim(rho.dim())?;
        DensityMatrix::new(self.0.apply_operator(rho.matrix())?.hermitian_part())
    }

    /// `after ∘ before`.
    pub fn compose(after: &QuantumChannel<T>, before: &QuantumChannel<T>) -> Result<Self> {
        Ok(Self(compose_maps(&after.0, &before.0)?))
    }
}

impl<T> Deref for QuantumChannel<T> {
    type Target = KrausMap<T>;

    fn deref(&self) -> &KrausMap<T> {
        &self.0
    }
}

/// `after ∘ before` for general Kraus maps, keeping every product `A_i B_j`.
pub fn compose_maps<T: Real>(after: &KrausMap<T>, before: &KrausMap<T>) -> Result<KrausMap<T>> {
    after.check_dim(before.dim())?;
    let mut kraus = Vec::with_capacity(after.kraus.len() * before.kraus.len());
    for a in &after.kraus {
        for b in &before.kraus {
            kraus.push(a * b);
        }
    }
    Ok(KrausMap {
        label: format!("{}∘{}", after.label, before.label),
        kraus,
    })
}

/// Choi state of a map; unit trace for trace-preserving maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(eig_hermitian(&self.mat)?.min())
    }

    /// Positive semidefinite down to `-tolerance`.
    pub fn is_positive(&self, tolerance: T) -> bool {
        matches!(self.min_eigenvalue(), Ok(l) if l >= -tolerance)
    }

    /// Reduced operator on the reference (first) factor.
    pub fn input_marginal(&self) -> ComplexMatrix<T> {
        let d = (self.mat.dim() as f64).sqrt().round() as usize;
        self.mat
            .partial_trace_second(d)
            .expect("Choi dimension is a square")
    }
}
