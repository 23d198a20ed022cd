use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use super::QuantumChannel;
use crate::error::{check_range, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

fn check_p<T: Real>(p: T) -> Result<()> {
    check_range("p", p.to_f64_lossy(), 0.0, 1.0)
}

/// `(1 − p/2) ρ + (p/2) ZρZ`; off-diagonals shrink by `1 − p`.
pub fn dephasing<T: Real>(p: T) -> Result<QuantumChannel<T>> {
    check_p(p)?;
    let half = T::lit(0.5);
    QuantumChannel::new(
        format!("dephasing({p})"),
        vec![
            ComplexMatrix::identity(2).scale((T::one() - p * half).sqrt()),
            ComplexMatrix::pauli_z().scale((p * half).sqrt()),
        ],
    )
}

/// `(1 − 3p/4) ρ + (p/4)(XρX + YρY + ZρZ)`; the Bloch vector shrinks by `1 − p`.
pub fn depolarizing<T: Real>(p: T) -> Result<QuantumChannel<T>> {
    check_p(p)?;
    let quarter = T::lit(0.25);
    let w = (p * quarter).sqrt();
    QuantumChannel::new(
        format!("depolarizing({p})"),
        vec![
            ComplexMatrix::identity(2).scale((T::one() - T::lit(3.0) * p * quarter).sqrt()),
            ComplexMatrix::pauli_x().scale(w),
            ComplexMatrix::pauli_y().scale(w),
            ComplexMatrix::pauli_z().scale(w),
        ],
    )
}

/// Decay `|1⟩ → |0⟩` with probability `p`.
pub fn amplitude_damping<T: Real>(p: T) -> Result<QuantumChannel<T>> {
    check_p(p)?;
    let zero = Complex::new(T::zero(), T::zero());
    let re = |x: T| Complex::new(x, T::zero());
    QuantumChannel::new(
        format!("amplitude_damping({p})"),
        vec![
            ComplexMatrix::new(2, vec![re(T::one()), zero, zero, re((T::one() - p).sqrt())])?,
            ComplexMatrix::new(2, vec![zero, re(p.sqrt()), zero, zero])?,
        ],
    )
}

/// Sends every qubit state to `I/2`.
pub fn fully_depolarizing<T: Real>() -> QuantumChannel<T> {
    depolarizing(T::one())
        .expect("p = 1 is in range")
        .with_label("fully_depolarizing")
}

/// One-parameter noise families swept over `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 3] = [
        ChannelFamily::Dephasing,
        ChannelFamily::Depolarizing,
        ChannelFamily::AmplitudeDamping,
    ];

    pub fn at<T: Real>(self, p: T) -> Result<QuantumChannel<T>> {
        match self {
            ChannelFamily::Dephasing => dephasing(p),
            ChannelFamily::Depolarizing => depolarizing(p),
            ChannelFamily::AmplitudeDamping => amplitude_damping(p),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Dephasing => "dephasing",
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::AmplitudeDamping => "amplitude-damping",
        }
    }

    pub fn is_unital(self) -> bool {
        !matches!(self, ChannelFamily::AmplitudeDamping)
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dephasing" => Ok(ChannelFamily::Dephasing),
            "depolarizing" => Ok(ChannelFamily::Depolarizing),
            "amplitude-damping" | "amplitude_damping" => Ok(ChannelFamily::AmplitudeDamping),
            other => Err(Error::Format(format!("unknown channel family `{other}`"))),
        }
    }
}
