//! Hermitian eigendecomposition for the small fixed dimensions used here.
//!
//! Qubit operators (2×2) use the closed-form solution. Anything larger, in
//! practice the 4×4 Choi matrices, goes through cyclic complex Jacobi.

use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// Maximum number of full Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative off-diagonal Frobenius norm at which Jacobi stops.
pub const JACOBI_TOLERANCE: f64 = 1e-14;

/// Eigenvalues in ascending order together with a unitary whose columns are
/// the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let fl: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| {
                if fl[k].is_zero() {
                    acc
                } else {
                    acc + v[(i, k)] * v[(j, k)].conj() * fl[k]
                }
            })
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|l| l)
    }

    pub fn max(&self) -> T {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn min(&self) -> T {
        self.values[0]
    }
}

/// Eigendecomposition `A = V diag(λ) V†` of a Hermitian matrix.
pub fn eig_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    a.check_hermitian()?;
    match a.dim() {
        1 => Ok(Eigen {
            values: vec![a[(0, 0)].re],
            vectors: ComplexMatrix::identity(1),
        }),
        2 => Ok(eig2(a)),
        _ => jacobi(a),
    }
}

fn eig2<T: Real>(a: &ComplexMatrix<T>) -> Eigen<T> {
    let (p, d) = (a[(0, 0)].re, a[(1, 1)].re);
    // average the two off-diagonal entries to absorb tiny asymmetry
    let b = (a[(0, 1)] + a[(1, 0)].conj()) * T::lit(0.5);
    let zero = Complex::zero();
    let one = Complex::new(T::one(), T::zero());

    if b.norm().is_zero() {
        // exact diagonal branch keeps tiny eigenvalues exact
        return if p <= d {
            Eigen {
                values: vec![p, d],
                vectors: ComplexMatrix::identity(2),
            }
        } else {
            Eigen {
                values: vec![d, p],
                vectors: ComplexMatrix::new(2, vec![zero, one, one, zero]).unwrap(),
            }
        };
    }

    let half = T::lit(0.5);
    let mean = (p + d) * half;
    let gap = (p - d) * half;
    let radius = gap.hypot(b.norm());
    let lo = mean - radius;
    let hi = mean + radius;

    // two algebraically equivalent eigenvector formulas; keep the better conditioned one
    let u = [b, Complex::new(lo - p, T::zero())];
    let w = [Complex::new(lo - d, T::zero()), b.conj()];
    let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let (v, n) = if nu >= nw { (u, nu) } else { (w, nw) };
    let v0 = v[0] / n;
    let v1 = v[1] / n;
    // second column is the exact orthogonal complement
    let vectors = ComplexMatrix::new(2, vec![v0, -v1.conj(), v1, v0.conj()]).unwrap();
    Eigen {
        values: vec![lo, hi],
        vectors,
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<T: Real>(input: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    let n = input.dim();
    let mut a = input.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let frob = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let threshold = tol::<T>(JACOBI_TOLERANCE) * frob;

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "Jacobi eigensolver",
                iterations: sweeps,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| {
        diag[i]
            .partial_cmp(&diag[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag.is_zero() {
        return;
    }
    let phase = apq / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (T::lit(2.0) * mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let conj_phase = phase.conj();

    // A <- A U with U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q)
    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * conj_phase * s;
        a[(k, q)] = akp * s + akq * conj_phase * c;
    }
    // A <- U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * conj_phase * s;
        v[(k, q)] = vkp * s + vkq * conj_phase * c;
    }
}
