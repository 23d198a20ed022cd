//! Distances and divergences between quantum states.

use super::{eig_hermitian, matrix_sqrt, ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

fn check_dims<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    }
}

/// Sum of singular values, `tr √(A†A)`.
pub fn trace_norm<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    if a.is_hermitian() {
        let e = eig_hermitian(a)?;
        return Ok(e.values.iter().map(|l| l.abs()).sum());
    }
    let gram = &a.adjoint() * a;
    let e = eig_hermitian(&gram.hermitian_part())?;
    Ok(e.values.iter().map(|l| l.max(T::zero()).sqrt()).sum())
}

/// Uhlmann fidelity `‖√ρ √σ‖₁²`, evaluated as `(tr √(√ρ σ √ρ))²`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let root = matrix_sqrt(rho.matrix())?;
    fidelity_with_root(&root, sigma.matrix())
}

/// Fidelity given a precomputed `√ρ`.
pub(crate) fn fidelity_with_root<T: Real>(
    sqrt_rho: &ComplexMatrix<T>,
    sigma: &ComplexMatrix<T>,
) -> Result<T> {
    let inner = sqrt_rho.sandwich(sigma).hermitian_part();
    if inner.dim() == 2 {
        // (tr √M)² = tr M + 2√det M; det M factorizes, so a rank-deficient
        // factor contributes an exact zero instead of √(round-off).
        let det = |m: &ComplexMatrix<T>| m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let det_inner = (det(sqrt_rho).norm_sqr() * det(sigma).re).max(T::zero());
        let value = inner.trace().re + T::lit(2.0) * det_inner.sqrt();
        return Ok(value.max(T::zero()).min(T::one()));
    }
    let e = eig_hermitian(&inner)?;
    let root_trace: T = e.values.iter().map(|l| l.max(T::zero()).sqrt()).sum();
    Ok((root_trace * root_trace).min(T::one()))
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let half = T::lit(0.5);
    let d = trace_norm(&(rho.matrix() - sigma.matrix()))? * half;
    Ok(d.max(T::zero()).min(T::one()))
}

/// Quantum relative entropy `tr ρ(log₂ρ − log₂η)` in bits.
///
/// Returns `+∞` when the support of `rho` is not contained in that of `eta`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, eta: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, eta)?;
    let er = eig_hermitian(rho.matrix())?;
    let ee = eig_hermitian(eta.matrix())?;
    let cut = tol::<T>(1e-12);
    let n = rho.dim();

    let mut entropy_term = T::zero();
    for &p in &er.values {
        if p > cut {
            entropy_term = entropy_term + p * p.log2();
        }
    }

    let eta_cut = cut * ee.max().max(T::zero());
    let mut cross = T::zero();
    for (i, &p) in er.values.iter().enumerate() {
        if p <= cut {
            continue;
        }
        for (j, &q) in ee.values.iter().enumerate() {
            let overlap = (0..n)
                .map(|k| er.vectors[(k, i)].conj() * ee.vectors[(k, j)])
                .fold(num_complex::Complex::new(T::zero(), T::zero()), |a, b| {
                    a + b
                })
                .norm_sqr();
            if overlap <= cut {
                continue;
            }
            if q <= eta_cut {
                return Ok(T::infinity());
            }
            cross = cross + p * overlap * q.log2();
        }
    }
    Ok((entropy_term - cross).max(T::zero()))
}
