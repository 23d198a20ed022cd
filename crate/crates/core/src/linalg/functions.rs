use super::{eig_hermitian, ComplexMatrix, Eigen};
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// Eigenvalues above `-NEGATIVE_CLAMP` are treated as round-off and set to 0
/// before taking square roots; anything lower is rejected.
pub const NEGATIVE_CLAMP: f64 = 1e-9;

/// Relative cutoff of the pseudo-inverse square root.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-12;

fn psd_eigen<T: Real>(a: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    let e = eig_hermitian(a)?;
    if e.min() < -tol::<T>(NEGATIVE_CLAMP) {
        return Err(Error::NotPositive {
            min_eigenvalue: e.min().to_f64_lossy(),
        });
    }
    Ok(e)
}

/// Principal square root of a positive semidefinite matrix.
pub fn matrix_sqrt<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let e = psd_eigen(a)?;
    Ok(e.reconstruct_with(|l| l.max(T::zero()).sqrt()))
}

/// Pseudo-inverse square root with the default relative cutoff
/// `1e-12 · λ_max`. Eigenvalues at or below the cutoff map to zero.
pub fn matrix_invsqrt_pinv<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    matrix_invsqrt_pinv_with_cutoff(a, tol::<T>(PINV_RELATIVE_CUTOFF))
}

pub fn matrix_invsqrt_pinv_with_cutoff<T: Real>(
    a: &ComplexMatrix<T>,
    relative_cutoff: T,
) -> Result<ComplexMatrix<T>> {
    let e = psd_eigen(a)?;
    let cutoff = relative_cutoff * e.max().max(T::zero());
    Ok(e.reconstruct_with(|l| {
        if l > cutoff && l > T::zero() {
            T::one() / l.sqrt()
        } else {
            T::zero()
        }
    }))
}

/// Orthogonal projector onto the eigenvectors of `a` whose eigenvalues exceed
/// `relative_cutoff · λ_max`.
pub fn support_projector<T: Real>(
    a: &ComplexMatrix<T>,
    relative_cutoff: T,
) -> Result<ComplexMatrix<T>> {
    let e = psd_eigen(a)?;
    let cutoff = relative_cutoff * e.max().max(T::zero());
    Ok(e.reconstruct_with(|l| {
        if l > cutoff && l > T::zero() {
            T::one()
        } else {
            T::zero()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type M = ComplexMatrix<f64>;

    #[test]
    fn sqrt_examples() {
        assert!(
            matrix_sqrt(&M::identity(2))
                .unwrap()
                .max_abs_diff(&M::identity(2))
                < 1e-15
        );
        let d = matrix_sqrt(&M::diag(&[4.0, 9.0])).unwrap();
        assert!(d.max_abs_diff(&M::diag(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn sqrt_in_x_eigenbasis() {
        // I/2 + X/4 has eigenvalues 3/4 on |+> and 1/4 on |->
        let a = &M::identity(2).scale(0.5) + &M::pauli_x().scale(0.25);
        let r = matrix_sqrt(&a).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex::new(h, 0.0), Complex::new(h, 0.0)];
        let minus = [Complex::new(h, 0.0), Complex::new(-h, 0.0)];
        let expected = &M::outer(&plus, &plus).scale(0.75f64.sqrt())
            + &M::outer(&minus, &minus).scale(0.25f64.sqrt());
        assert!(r.max_abs_diff(&expected) < 1e-14);
        assert!((&r * &r).max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative_spectrum() {
        let a = M::diag(&[1.0, -1e-6]);
        assert!(matches!(matrix_sqrt(&a), Err(Error::NotPositive { .. })));
        // round-off sized negatives are clamped
        let a = M::diag(&[1.0, -1e-13]);
        assert_eq!(matrix_sqrt(&a).unwrap()[(1, 1)].re, 0.0);
    }

    #[test]
    fn invsqrt_examples() {
        let r = matrix_invsqrt_pinv(&M::identity(2)).unwrap();
        assert!(r.max_abs_diff(&M::identity(2)) < 1e-15);
        let r = matrix_invsqrt_pinv(&M::diag(&[4.0, 0.0])).unwrap();
        assert!(r.max_abs_diff(&M::diag(&[0.5, 0.0])) < 1e-15);
        // below the relative cutoff
        let r = matrix_invsqrt_pinv(&M::diag(&[1.0, 1e-13])).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
    }

    #[test]
    fn invsqrt_projects_onto_support() {
        let a = &M::identity(2).scale(0.5) + &M::pauli_x().scale(0.5);
        let r = matrix_invsqrt_pinv(&a).unwrap();
        let p = support_projector(&a, 1e-12).unwrap();
        assert!((&(&r * &a) * &r).max_abs_diff(&p) < 1e-12);
        assert!((&p * &p).max_abs_diff(&p) < 1e-12);
    }
}
