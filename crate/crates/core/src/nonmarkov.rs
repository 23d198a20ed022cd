//! Time-dependent dephasing, its Petz-approximated counterpart, and
//! non-Markovianity diagnostics.
//!
//! A [`DynamicsModel`] gives the dephasing probability `p(t)` of the map
//! `Λ_t`. The approximated map at final time `R·t` routes through the
//! intermediate time `t`:
//!
//! ```text
//! Λ^approx = Λ_{R t} ∘ P_t ∘ Λ_t,   P_t = Petz(Λ_t, I/2)
//! ```
//!
//! Times are in units of `1/ω`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::channels::{compose_maps, dephasing, QuantumChannel};
use crate::error::{check_range, Error, Result};
use crate::linalg::{trace_distance, trace_norm, DensityMatrix};
use crate::petz::ReferenceState;
use crate::scalar::Real;

pub const DEFAULT_RATIO: f64 = 2.0;

/// Discrete increases smaller than this are treated as numerical noise.
pub const REVIVAL_TOLERANCE: f64 = 1e-9;

/// Rates below `-NEGATIVE_RATE_TOLERANCE` count as negative.
pub const NEGATIVE_RATE_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_QUAD_TOLERANCE: f64 = 1e-10;
pub const SIMPSON_MAX_DEPTH: u32 = 40;

/// Probabilities this far outside `[0, 1]` are clamped rather than rejected.
const PROBABILITY_SLACK: f64 = 1e-12;

pub type TimeFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// `α (1 − e^{−2(1 − cos ωt)})` with `α = e⁴/(e⁴ − 1)`.
pub fn p_case1<T: Real>(t: T, omega: T) -> T {
    let e4 = T::lit(4.0).exp();
    let alpha = e4 / (e4 - T::one());
    alpha * (T::one() - (-T::lit(2.0) * (T::one() - (omega * t).cos())).exp())
}

/// `1 − e^{−0.3 ωt} cos² ωt`.
pub fn p_case2<T: Real>(t: T, omega: T) -> T {
    let wt = omega * t;
    let c = wt.cos();
    T::one() - (-T::lit(0.3) * wt).exp() * c * c
}

#[derive(Clone)]
pub enum DynamicsKind<T> {
    Case1,
    Case2,
    Custom(TimeFn<T>),
}

impl<T> fmt::Debug for DynamicsKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsKind::Case1 => f.write_str("Case1"),
            DynamicsKind::Case2 => f.write_str("Case2"),
            DynamicsKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Dephasing dynamics `Λ_t = dephasing(p(t))`.
#[derive(Debug, Clone)]
pub struct DynamicsModel<T> {
    kind: DynamicsKind<T>,
    omega: T,
    ratio: T,
}

impl<T: Real> DynamicsModel<T> {
    pub fn case1() -> Self {
        Self::with_kind(DynamicsKind::Case1)
    }

    pub fn case2() -> Self {
        Self::with_kind(DynamicsKind::Case2)
    }

    /// Arbitrary `p(t)`; `custom(|_| 0.0)` is the identity dynamics.
    pub fn custom(p: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::with_kind(DynamicsKind::Custom(Arc::new(p)))
    }

    /// Case 1 or case 2 by number.
    pub fn case(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Self::case1()),
            2 => Ok(Self::case2()),
            _ => Err(Error::OutOfRange {
                name: "case",
                value: n as f64,
                min: 1.0,
                max: 2.0,
            }),
        }
    }

    fn with_kind(kind: DynamicsKind<T>) -> Self {
        Self {
            kind,
            omega: T::one(),
            ratio: T::lit(DEFAULT_RATIO),
        }
    }

    pub fn with_omega(mut self, omega: T) -> Result<Self> {
        if !omega.is_finite() || omega <= T::zero() {
            return Err(Error::OutOfRange {
                name: "omega",
                value: omega.to_f64_lossy(),
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        self.omega = omega;
        Ok(self)
    }

    /// Final-to-intermediate time ratio of the approximated map.
    pub fn with_ratio(mut self, ratio: T) -> Result<Self> {
        if !ratio.is_finite() || ratio <= T::one() {
            return Err(Error::OutOfRange {
                name: "ratio",
                value: ratio.to_f64_lossy(),
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        self.ratio = ratio;
        Ok(self)
    }

    pub fn kind(&self) -> &DynamicsKind<T> {
        &self.kind
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn ratio(&self) -> T {
        self.ratio
    }

    /// Raw dephasing probability at time `t`.
    pub fn p(&self, t: T) -> T {
        match &self.kind {
            DynamicsKind::Case1 => p_case1(t, self.omega),
            DynamicsKind::Case2 => p_case2(t, self.omega),
            DynamicsKind::Custom(f) => f(t),
        }
    }

    fn checked_p(&self, t: T) -> Result<T> {
        check_range("t", t.to_f64_lossy(), 0.0, f64::INFINITY)?;
        let p = self.p(t);
        let slack = T::lit(PROBABILITY_SLACK);
        if !p.is_finite() || p < -slack || p > T::one() + slack {
            return Err(Error::InvalidProbability {
                t: t.to_f64_lossy(),
                value: p.to_f64_lossy(),
            });
        }
        Ok(p.max(T::zero()).min(T::one()))
    }

    /// `Λ_t`.
    pub fn map_at(&self, t: T) -> Result<QuantumChannel<T>> {
        dephasing(self.checked_p(t)?)
    }

    /// `Λ_{R t} ∘ Petz(Λ_t, I/2) ∘ Λ_t`.
    pub fn approx_map(&self, t: T) -> Result<QuantumChannel<T>> {
        let inner = self.map_at(t)?;
        let outer = self.map_at(self.ratio * t)?;
        let petz = ReferenceState::maximally_mixed().petz_map(&inner)?;
        let recovered = compose_maps(petz.map(), inner.as_map())?;
        let full = compose_maps(outer.as_map(), &recovered)?;
        Ok(QuantumChannel::from_map(full)?.with_label("approx"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trajectory {
    Original,
    Approx,
}

impl Trajectory {
    pub fn name(self) -> &'static str {
        match self {
            Trajectory::Original => "original",
            Trajectory::Approx => "approx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub value: T,
}

/// `[0, dt, 2dt, …]` up to `t_max`, each point computed as `i·dt`.
pub fn time_grid<T: Real>(t_max: T, dt: T) -> Result<Vec<T>> {
    if !dt.is_finite() || dt <= T::zero() {
        return Err(Error::OutOfRange {
            name: "dt",
            value: dt.to_f64_lossy(),
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    check_range("t_max", t_max.to_f64_lossy(), 0.0, f64::INFINITY)?;
    let steps = (t_max / dt + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    Ok((0..=steps).map(|i| T::lit(i as f64) * dt).collect())
}

fn check_time_grid<T: Real>(grid: &[T]) -> Result<()> {
    for (i, &t) in grid.iter().enumerate() {
        check_range("t", t.to_f64_lossy(), 0.0, f64::INFINITY)?;
        if i > 0 && t < grid[i - 1] {
            return Err(Error::Format("time grid is not ascending".into()));
        }
    }
    Ok(())
}

fn evaluate<T: Real>(
    grid: &[T],
    f: impl Fn(T) -> Result<T> + Send + Sync,
) -> Result<Vec<TrajectoryPoint<T>>> {
    check_time_grid(grid)?;
    grid.par_iter()
        .map(|&t| Ok(TrajectoryPoint { t, value: f(t)? }))
        .collect()
}

/// Trace distance between the images of `|+⟩` and `|−⟩` at the final time
/// `R·t`, under the exact or the approximated dynamics.
pub fn backflow_trajectory<T: Real>(
    model: &DynamicsModel<T>,
    which: Trajectory,
    t_grid: &[T],
) -> Result<Vec<TrajectoryPoint<T>>> {
    let (plus, minus) = (DensityMatrix::plus(), DensityMatrix::minus());
    evaluate(t_grid, |t| {
        let ch = match which {
            Trajectory::Original => model.map_at(model.ratio * t)?,
            Trajectory::Approx => model.approx_map(t)?,
        };
        trace_distance(&ch.apply(&plus)?, &ch.apply(&minus)?)
    })
}

/// `½ ‖J(Λ^approx) − J(Λ_{R t})‖₁` over the grid.
pub fn choi_distance_trajectory<T: Real>(
    model: &DynamicsModel<T>,
    t_grid: &[T],
) -> Result<Vec<TrajectoryPoint<T>>> {
    evaluate(t_grid, |t| {
        let approx = model.approx_map(t)?.choi();
        let exact = model.map_at(model.ratio * t)?.choi();
        Ok(trace_norm(&(approx.matrix() - exact.matrix()))? * T::lit(0.5))
    })
}

/// Indices `i` with `value[i+1] > value[i] + REVIVAL_TOLERANCE`.
pub fn increasing_steps<T: Real>(points: &[TrajectoryPoint<T>]) -> Vec<usize> {
    let tol = T::lit(REVIVAL_TOLERANCE);
    points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1].value > w[0].value + tol)
        .map(|(i, _)| i)
        .collect()
}

pub fn has_backflow<T: Real>(points: &[TrajectoryPoint<T>]) -> bool {
    !increasing_steps(points).is_empty()
}

/// A rise from a local minimum to the following local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revival<T> {
    pub trough: usize,
    pub peak: usize,
    pub trough_value: T,
    pub peak_value: T,
}

impl<T: Real> Revival<T> {
    pub fn height(&self) -> T {
        self.peak_value - self.trough_value
    }
}

/// All revivals in order of occurrence.
pub fn revivals<T: Real>(points: &[TrajectoryPoint<T>]) -> Vec<Revival<T>> {
    let tol = T::lit(REVIVAL_TOLERANCE);
    let n = points.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < n {
        if points[i + 1].value <= points[i].value + tol {
            i += 1;
            continue;
        }
        let trough = i;
        let mut peak = i + 1;
        while peak + 1 < n && points[peak + 1].value > points[peak].value {
            peak += 1;
        }
        out.push(Revival {
            trough,
            peak,
            trough_value: points[trough].value,
            peak_value: points[peak].value,
        });
        i = peak;
    }
    out
}

pub fn first_revival<T: Real>(points: &[TrajectoryPoint<T>]) -> Option<Revival<T>> {
    revivals(points).into_iter().next()
}

/// Largest revival height, zero for monotone trajectories.
pub fn max_revival_height<T: Real>(points: &[TrajectoryPoint<T>]) -> T {
    revivals(points)
        .iter()
        .map(Revival::height)
        .fold(T::zero(), T::max)
}

/// Single-channel Pauli generator `L(ρ) = γ_k(t)(σ_k ρ σ_k − ρ)`; the other
/// two rates vanish.
#[derive(Clone)]
pub struct GeneratorModel<T> {
    rate: TimeFn<T>,
    active: usize,
}

impl<T> fmt::Debug for GeneratorModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorModel")
            .field("active", &self.active)
            .finish_non_exhaustive()
    }
}

impl<T: Real> GeneratorModel<T> {
    /// Rate `gamma` on Pauli channel `k ∈ {1, 2, 3}`.
    pub fn new(k: usize, gamma: impl Fn(T) -> T + Send + Sync + 'static) -> Result<Self> {
        check_range("k", k as f64, 1.0, 3.0)?;
        Ok(Self {
            rate: Arc::new(gamma),
            active: k,
        })
    }

    /// Dephasing (`σ_3`) with a constant rate.
    pub fn constant(c: T) -> Self {
        Self::new(3, move |_| c).expect("k = 3")
    }

    /// Dephasing with `γ(t) = sin t`.
    pub fn sine() -> Self {
        Self::new(3, T::sin).expect("k = 3")
    }

    /// Dephasing with
    /// `γ(t) = cos t (−0.3 cos t − 2 sin t) / (e^{0.3 t} − 2 cos² t)`.
    /// The denominator has zeros, so the rate has isolated poles.
    pub fn oscillatory() -> Self {
        Self::new(3, |t: T| {
            let (s, c) = t.sin_cos();
            c * (-T::lit(0.3) * c - T::lit(2.0) * s)
                / ((T::lit(0.3) * t).exp() - T::lit(2.0) * c * c)
        })
        .expect("k = 3")
    }

    pub fn active_channel(&self) -> usize {
        self.active
    }

    /// `γ_k(t)` for `k ∈ {1, 2, 3}`.
    pub fn gamma(&self, k: usize, t: T) -> T {
        if k == self.active {
            (self.rate)(t)
        } else {
            T::zero()
        }
    }

    pub fn rate(&self, t: T) -> T {
        (self.rate)(t)
    }
}

/// `∫_a^b f` by adaptive Simpson to absolute tolerance `tol`.
pub fn adaptive_simpson<T: Real>(f: &dyn Fn(T) -> T, a: T, b: T, tol: T) -> Result<T> {
    let two = T::lit(2.0);
    let (fa, fb) = (f(a), f(b));
    let m = (a + b) / two;
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, SIMPSON_MAX_DEPTH)
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Real>(
    f: &dyn Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> Result<T> {
    let two = T::lit(2.0);
    let m = (a + b) / two;
    let (lm, rm) = ((a + m) / two, (m + b) / two);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::NoConvergence {
            what: "adaptive Simpson (non-finite integrand)",
            iterations: (SIMPSON_MAX_DEPTH - depth) as usize,
        });
    }
    if delta.abs() <= T::lit(15.0) * tol {
        return Ok(left + right + delta / T::lit(15.0));
    }
    if depth == 0 {
        return Err(Error::NoConvergence {
            what: "adaptive Simpson",
            iterations: SIMPSON_MAX_DEPTH as usize,
        });
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, tol / two, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, tol / two, depth - 1)?,
    )
}

/// `½ (1 − e^{−2Γ(t)})` with `Γ(t) = ∫₀ᵗ γ`.
pub fn gamma_to_probability<T: Real>(gen: &GeneratorModel<T>, t: T, quad_tol: T) -> Result<T> {
    check_range("t", t.to_f64_lossy(), 0.0, f64::INFINITY)?;
    if quad_tol.is_nan() || quad_tol <= T::zero() {
        return Err(Error::OutOfRange {
            name: "quad_tol",
            value: quad_tol.to_f64_lossy(),
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let rate = |s: T| gen.rate(s);
    let big_gamma = adaptive_simpson(&rate, T::zero(), t, quad_tol)?;
    Ok(T::lit(0.5) * (T::one() - (-T::lit(2.0) * big_gamma).exp()))
}

/// Closed grid span `[start, end]` on which the rate is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeInterval<T> {
    pub start: T,
    pub end: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovianityWitness<T> {
    pub intervals: Vec<NegativeInterval<T>>,
    /// Grid points where the rate is not finite.
    pub singular: Vec<T>,
}

impl<T> MarkovianityWitness<T> {
    pub fn is_markovian(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Maximal runs of grid points where some rate is below
/// `-NEGATIVE_RATE_TOLERANCE`. Non-finite samples end a run and are listed
/// separately.
pub fn markovianity_witness<T: Real>(
    gen: &GeneratorModel<T>,
    t_grid: &[T],
) -> Result<MarkovianityWitness<T>> {
    check_time_grid(t_grid)?;
    let tol = T::lit(NEGATIVE_RATE_TOLERANCE);
    let mut intervals = Vec::new();
    let mut singular = Vec::new();
    let mut open: Option<NegativeInterval<T>> = None;
    for &t in t_grid {
        let rates = [gen.gamma(1, t), gen.gamma(2, t), gen.gamma(3, t)];
        if rates.iter().any(|r| !r.is_finite()) {
            singular.push(t);
            intervals.extend(open.take());
            continue;
        }
        if rates.iter().any(|&r| r < -tol) {
            match open.as_mut() {
                Some(run) => run.end = t,
                None => open = Some(NegativeInterval { start: t, end: t }),
            }
        } else {
            intervals.extend(open.take());
        }
    }
    intervals.extend(open);
    Ok(MarkovianityWitness {
        intervals,
        singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type Model = DynamicsModel<f64>;

    fn grid_1000() -> Vec<f64> {
        (0..1000).map(|i| i as f64 * 0.01).collect()
    }

    #[test]
    fn case1_probability_examples() {
        assert_eq!(p_case1(0.0, 1.0), 0.0);
        assert!((p_case1(PI, 1.0) - 1.0).abs() < 1e-15);
        assert!(p_case1(2.0 * PI, 1.0).abs() < 1e-15);
        assert!((p_case1(PI / 2.0, 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn case2_probability_examples() {
        assert_eq!(p_case2(0.0, 1.0), 0.0);
        assert!((p_case2(PI / 2.0, 1.0) - 1.0).abs() < 1e-15);
        let expected = 1.0 - (-0.3 * PI).exp();
        assert!((p_case2(PI, 1.0) - expected).abs() < 1e-15);
        assert!(p_case2(200.0, 1.0) > 1.0 - 1e-15);
    }

    #[test]
    fn probabilities_stay_in_unit_interval() {
        for t in (0..20_000).map(|i| i as f64 * 0.001) {
            for m in [Model::case1(), Model::case2()] {
                assert!(m.map_at(t).is_ok(), "t = {t}");
            }
        }
    }

    #[test]
    fn map_at_examples() {
        let id = QuantumChannel::<f64>::identity(2);
        assert!(Model::case1().map_at(0.0).unwrap().same_map(&id));
        let full = dephasing(1.0).unwrap();
        assert!(Model::case1().map_at(PI).unwrap().same_map(&full));
        assert!(Model::case2().map_at(PI / 2.0).unwrap().same_map(&full));
    }

    #[test]
    fn invalid_custom_probability() {
        let m = Model::custom(|t| 2.0 * t);
        assert!(matches!(
            m.map_at(1.0),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(m.map_at(0.25).is_ok());
        assert!(Model::case1().map_at(-1.0).is_err());
    }

    #[test]
    fn approx_map_examples() {
        let id = QuantumChannel::<f64>::identity(2);
        assert!(Model::case1().approx_map(0.0).unwrap().same_map(&id));
        let full = dephasing(1.0).unwrap();
        assert!(Model::case1().approx_map(PI).unwrap().same_map(&full));
        for m in [Model::case1(), Model::case2()] {
            for t in [0.3, 1.1, 2.7, 5.0] {
                let (pt, p2t) = (m.p(t), m.p(2.0 * t));
                let coherence = (1.0 - p2t) * (1.0 - pt).powi(2);
                let expected = dephasing(1.0 - coherence).unwrap();
                assert!(m.approx_map(t).unwrap().same_map(&expected));
            }
        }
    }

    #[test]
    fn approx_map_is_cptp() {
        for m in [Model::case1(), Model::case2()] {
            for t in grid_1000().into_iter().step_by(7) {
                let ch = m.approx_map(t).unwrap();
                assert!(ch.trace_preservation_error() <= 1e-10);
                assert!(ch.choi().is_positive(1e-10));
            }
        }
    }

    #[test]
    fn trajectories_match_closed_forms() {
        let grid = grid_1000();
        for m in [Model::case1(), Model::case2()] {
            let orig = backflow_trajectory(&m, Trajectory::Original, &grid).unwrap();
            let approx = backflow_trajectory(&m, Trajectory::Approx, &grid).unwrap();
            let choi = choi_distance_trajectory(&m, &grid).unwrap();
            for i in 0..grid.len() {
                let t = grid[i];
                let (pt, p2t) = (m.p(t), m.p(2.0 * t));
                assert_eq!(orig[i].t, t);
                assert!((orig[i].value - (1.0 - p2t)).abs() < 1e-9);
                assert!((approx[i].value - (1.0 - p2t) * (1.0 - pt).powi(2)).abs() < 1e-9);
                let c = 0.5 * (1.0 - p2t) * (1.0 - (1.0 - pt).powi(2));
                assert!((choi[i].value - c).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn trajectory_examples() {
        let m = Model::case1();
        let grid = [0.0, PI / 2.0, PI];
        let orig = backflow_trajectory(&m, Trajectory::Original, &grid).unwrap();
        let approx = backflow_trajectory(&m, Trajectory::Approx, &grid).unwrap();
        assert!((orig[0].value - 1.0).abs() < 1e-12);
        assert!((approx[0].value - 1.0).abs() < 1e-12);
        assert!(orig[1].value.abs() < 1e-12);
        let choi = choi_distance_trajectory(&m, &grid).unwrap();
        assert!(choi[0].value.abs() < 1e-12);
        assert!((choi[2].value - 0.5).abs() < 1e-12);

        let still = Model::custom(|_| 0.0);
        let zeros = choi_distance_trajectory(&still, &grid_1000()).unwrap();
        assert!(zeros.iter().all(|p| p.value.abs() < 1e-12));
    }

    #[test]
    fn markovian_model_has_no_backflow() {
        let m = Model::custom(|t: f64| 1.0 - (-0.4 * t).exp());
        for which in [Trajectory::Original, Trajectory::Approx] {
            let traj = backflow_trajectory(&m, which, &grid_1000()).unwrap();
            assert!(!has_backflow(&traj));
            assert!(revivals(&traj).is_empty());
        }
    }

    #[test]
    fn both_cases_show_backflow_and_attenuation() {
        let grid = time_grid(10.0, 0.01).unwrap();
        for m in [Model::case1(), Model::case2()] {
            let orig = backflow_trajectory(&m, Trajectory::Original, &grid).unwrap();
            let approx = backflow_trajectory(&m, Trajectory::Approx, &grid).unwrap();
            assert!(has_backflow(&orig) && has_backflow(&approx));
        }
        let m = Model::case1();
        let orig = backflow_trajectory(&m, Trajectory::Original, &grid).unwrap();
        let approx = backflow_trajectory(&m, Trajectory::Approx, &grid).unwrap();
        assert!(max_revival_height(&approx) <= max_revival_height(&orig));
        let (ro, ra) = (
            first_revival(&orig).unwrap(),
            first_revival(&approx).unwrap(),
        );
        assert!(ra.peak_value < 0.2 * ro.peak_value);
    }

    #[test]
    fn revival_detection() {
        let pts: Vec<_> = [1.0, 0.5, 0.2, 0.6, 0.9, 0.4, 0.1, 0.3]
            .iter()
            .enumerate()
            .map(|(i, &v)| TrajectoryPoint {
                t: i as f64,
                value: v,
            })
            .collect();
        let r = revivals(&pts);
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].trough, r[0].peak), (2, 4));
        assert!((r[0].height() - 0.7).abs() < 1e-15);
        assert_eq!((r[1].trough, r[1].peak), (6, 7));
        assert_eq!(increasing_steps(&pts), vec![2, 3, 6]);
    }

    #[test]
    fn ratio_changes_final_time() {
        let m = Model::case1().with_ratio(3.0).unwrap();
        let orig = backflow_trajectory(&m, Trajectory::Original, &[0.4]).unwrap();
        assert!((orig[0].value - (1.0 - p_case1(1.2, 1.0))).abs() < 1e-12);
        assert!(Model::case1().with_ratio(1.0).is_err());
        assert!(Model::case1().with_omega(0.0).is_err());
    }

    #[test]
    fn time_grid_construction() {
        let g = time_grid(10.0, 0.01).unwrap();
        assert_eq!(g.len(), 1001);
        assert_eq!(g[1000], 10.0);
        assert_eq!(time_grid(1.0, 0.3).unwrap().len(), 4);
        assert!(time_grid(1.0, 0.0).is_err());
        assert!(backflow_trajectory(&Model::case1(), Trajectory::Original, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let zero = GeneratorModel::constant(0.0);
        let c = GeneratorModel::constant(0.7);
        let sine = GeneratorModel::<f64>::sine();
        for t in [0.0f64, 0.5, 2.0, 7.5] {
            assert_eq!(gamma_to_probability(&zero, t, 1e-10).unwrap(), 0.0);
            let exact = 0.5 * (1.0 - (-2.0 * 0.7 * t).exp());
            assert!((gamma_to_probability(&c, t, 1e-10).unwrap() - exact).abs() < 1e-12);
            let exact = 0.5 * (1.0 - (-2.0 * (1.0 - t.cos())).exp());
            assert!((gamma_to_probability(&sine, t, 1e-10).unwrap() - exact).abs() < 1e-10 + 1e-12);
        }
    }

    #[test]
    fn quadrature_reports_divergence() {
        let pole = GeneratorModel::new(3, |t: f64| 1.0 / (t - 1.0)).unwrap();
        assert!(matches!(
            gamma_to_probability(&pole, 2.0, 1e-10),
            Err(Error::NoConvergence { .. })
        ));
        assert!(gamma_to_probability(&GeneratorModel::constant(1.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn witness_examples() {
        let grid: Vec<f64> = (0..=628).map(|i| i as f64 * 0.01).collect();
        assert!(markovianity_witness(&GeneratorModel::constant(1.0), &grid)
            .unwrap()
            .is_markovian());
        let w = markovianity_witness(&GeneratorModel::constant(-1.0), &grid).unwrap();
        assert_eq!(
            w.intervals,
            vec![NegativeInterval {
                start: 0.0,
                end: grid[628]
            }]
        );
        let w = markovianity_witness(&GeneratorModel::sine(), &grid).unwrap();
        assert_eq!(w.intervals.len(), 1);
        assert!((w.intervals[0].start - PI).abs() <= 0.01);
        assert!((w.intervals[0].end - 2.0 * PI).abs() <= 0.01);
        assert!(w.singular.is_empty());
    }

    #[test]
    fn generator_channel_selection() {
        let g = GeneratorModel::new(1, |_| 2.0).unwrap();
        assert_eq!(g.gamma(1, 0.3), 2.0);
        assert_eq!(g.gamma(3, 0.3), 0.0);
        assert!(GeneratorModel::new(4, |_: f64| 0.0).is_err());
    }

    #[test]
    fn oscillatory_rate_goes_negative() {
        let grid = time_grid(10.0, 0.01).unwrap();
        let w = markovianity_witness(&GeneratorModel::oscillatory(), &grid).unwrap();
        assert!(!w.is_markovian());
    }

    #[test]
    fn single_precision_dynamics() {
        let m = DynamicsModel::<f32>::case1();
        let traj = backflow_trajectory(&m, Trajectory::Approx, &[0.0f32, 0.5, 1.0]).unwrap();
        let expected = (1.0 - p_case1(2.0f32, 1.0)) * (1.0 - p_case1(1.0f32, 1.0)).powi(2);
        assert!((traj[2].value - expected).abs() < 1e-5);
    }
}
