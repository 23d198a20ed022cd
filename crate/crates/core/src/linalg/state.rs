use num_complex::Complex;

use super::{eig_hermitian, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// Eigenvalues in `[-ROUNDOFF_NEGATIVE, 0)` are clamped to zero on construction.
pub const ROUNDOFF_NEGATIVE: f64 = 1e-10;

/// Hermitian positive semidefinite operator of unit trace.
///
/// The one relaxation is [`DensityMatrix::subnormalized`], which admits trace
/// below one for the outputs of recovery maps acting off the support of their
/// normalizing operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        let state = Self::subnormalized(mat)?;
        let trace = state.trace();
        if (trace - T::one()).abs() > tol::<T>(1e-12) {
            return Err(Error::BadTrace {
                trace: trace.to_f64_lossy(),
            });
        }
        Ok(state)
    }

    /// Positive semidefinite with trace at most one.
    pub fn subnormalized(mat: ComplexMatrix<T>) -> Result<Self> {
        mat.check_hermitian()?;
        let e = eig_hermitian(&mat)?;
        if e.min() < -tol::<T>(ROUNDOFF_NEGATIVE) {
            return Err(Error::NotPositive {
                min_eigenvalue: e.min().to_f64_lossy(),
            });
        }
        let mat = if e.min() < T::zero() {
            e.reconstruct_with(|l| l.max(T::zero()))
        } else {
            mat.hermitian_part()
        };
        let trace = mat.trace().re;
        if trace > T::one() + tol::<T>(1e-12) {
            return Err(Error::BadTrace {
                trace: trace.to_f64_lossy(),
            });
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm.is_zero() {
            return Err(Error::BadTrace { trace: 0.0 });
        }
        let v: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(k, k)] = Complex::new(T::one(), T::zero());
        Self { mat: m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale(T::one() / T::lit(dim as f64)),
        }
    }

    /// Qubit state `(I + r·σ) / 2`.
    pub fn from_bloch(r: [T; 3]) -> Result<Self> {
        let half = T::lit(0.5);
        let m = ComplexMatrix::new(
            2,
            vec![
                Complex::new((T::one() + r[2]) * half, T::zero()),
                Complex::new(r[0] * half, -r[1] * half),
                Complex::new(r[0] * half, r[1] * half),
                Complex::new((T::one() - r[2]) * half, T::zero()),
            ],
        )?;
        Self::new(m)
    }

    /// `|+⟩⟨+|`.
    pub fn plus() -> Self {
        Self::from_bloch([T::one(), T::zero(), T::zero()]).unwrap()
    }

    /// `|−⟩⟨−|`.
    pub fn minus() -> Self {
        Self::from_bloch([-T::one(), T::zero(), T::zero()]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn trace(&self) -> T {
        self.mat.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace() - T::one()).abs() <= tol::<T>(1e-12)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> T {
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Bloch vector `(tr ρX, tr ρY, tr ρZ)` of a qubit state.
    pub fn bloch_vector(&self) -> [T; 3] {
        assert_eq!(self.dim(), 2, "Bloch vector is defined for qubits");
        let two = T::lit(2.0);
        let off = self.mat[(1, 0)];
        [
            two * off.re,
            two * off.im,
            self.mat[(0, 0)].re - self.mat[(1, 1)].re,
        ]
    }

    pub fn determinant(&self) -> T {
        assert_eq!(self.dim(), 2, "closed-form determinant is for qubits");
        (self.mat[(0, 0)] * self.mat[(1, 1)] - self.mat[(0, 1)] * self.mat[(1, 0)]).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;
    type D = DensityMatrix<f64>;

    #[test]
    fn rejects_invalid_states() {
        assert!(matches!(
            D::new(M::diag(&[0.7, 0.7])),
            Err(Error::BadTrace { .. })
        ));
        assert!(matches!(
            D::new(M::diag(&[1.2, -0.2])),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            D::new(M::from_real(2, &[0.5, 0.5, 0.0, 0.5]).unwrap()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn clamps_roundoff_negatives() {
        let d = D::new(M::diag(&[1.0 + 1e-13, -1e-13])).unwrap();
        assert!(d.matrix()[(1, 1)].re >= 0.0);
    }

    #[test]
    fn subnormalized_accepts_small_trace() {
        let d = D::subnormalized(M::diag(&[0.3, 0.0])).unwrap();
        assert!(!d.is_normalized());
        assert!(D::subnormalized(M::diag(&[0.8, 0.3])).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        let d = D::from_bloch([0.1, -0.2, 0.3]).unwrap();
        let r = d.bloch_vector();
        assert!(
            (r[0] - 0.1).abs() < 1e-15 && (r[1] + 0.2).abs() < 1e-15 && (r[2] - 0.3).abs() < 1e-15
        );
        assert!((d.purity() - 0.5 * (1.0 + 0.14)).abs() < 1e-15);
    }
}
