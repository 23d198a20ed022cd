//! Monte Carlo estimation of the average recovery fidelity.
//!
//! Input states are drawn from the Hilbert-Schmidt measure: a Haar-random
//! two-qubit pure state (normalized complex Gaussian vector) with the second
//! qubit traced out. Sample `k` draws from its own ChaCha stream keyed by
//! `(seed, k)`, and reductions run over index-ordered buffers, so estimates
//! are bit-identical for any thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use num_complex::Complex;

use crate::channels::{ChannelFamily, QuantumChannel};
use crate::error::{check_range, Error, Result};
use crate::linalg::{fidelity_with_root, matrix_sqrt, ComplexMatrix, DensityMatrix};
use crate::petz::{PreparedRecovery, RecoveryStrategy, ReferenceState};
use crate::scalar::Real;

pub const DEFAULT_SAMPLES: usize = 10_000;

/// Two sweep cells whose means differ by at most this are tied.
pub const ARGMAX_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub n_samples: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::OutOfRange {
                name: "n_samples",
                value: 0.0,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self { n_samples, seed })
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            n_samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// Mean and population variance of per-sample fidelities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEstimate<T> {
    pub mean: T,
    pub variance: T,
    pub n: usize,
}

impl<T: Real> FidelityEstimate<T> {
    pub fn from_samples(values: &[T]) -> Self {
        let n = values.len();
        let nf = T::lit(n as f64);
        let mean = pairwise_sum(values) / nf;
        let squares: Vec<T> = values.iter().map(|&v| (v - mean) * (v - mean)).collect();
        let variance = pairwise_sum(&squares) / nf;
        Self { mean, variance, n }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> T {
        (self.variance / T::lit(self.n as f64)).sqrt()
    }
}

/// Pairwise summation; the result depends only on the order of `values`.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |a, &b| a + b);
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Random stream for sample `index` of a run seeded with `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Hilbert-Schmidt random mixed qubit.
pub fn random_mixed_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix<T>
where
    StandardNormal: Distribution<T>,
{
    loop {
        let psi: Vec<Complex<T>> = (0..4)
            .map(|_| {
                Complex::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                )
            })
            .collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm < T::lit(1e-100).max(T::min_positive_value()) {
            continue;
        }
        let psi: Vec<_> = psi.iter().map(|z| z / norm).collect();
        let reduced = ComplexMatrix::outer(&psi, &psi)
            .partial_trace_second(2)
            .expect("4 = 2 × 2");
        return DensityMatrix::new(reduced.hermitian_part())
            .expect("partial trace of a pure state is a state");
    }
}

/// A fixed ensemble of input states with their square roots cached.
#[derive(Debug, Clone)]
pub struct SampleSet<T> {
    states: Vec<DensityMatrix<T>>,
    roots: Vec<ComplexMatrix<T>>,
}

impl<T: Real> SampleSet<T>
where
    StandardNormal: Distribution<T>,
{
    pub fn draw(cfg: &SampleConfig) -> Self {
        let states: Vec<DensityMatrix<T>> = (0..cfg.n_samples as u64)
            .into_par_iter()
            .map(|k| random_mixed_qubit(&mut sample_stream(cfg.seed, k)))
            .collect();
        let roots = states
            .par_iter()
            .map(|s| matrix_sqrt(s.matrix()).expect("states are positive"))
            .collect();
        Self { states, roots }
    }
}

impl<T: Real> SampleSet<T> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    /// Per-sample fidelities `F(ρ_k, R(Λ(ρ_k)))`, in sample order.
    pub fn fidelities(
        &self,
        ch: &QuantumChannel<T>,
        recovery: &PreparedRecovery<T>,
    ) -> Result<Vec<T>> {
        self.states
            .par_iter()
            .zip(self.roots.par_iter())
            .map(|(rho, root)| {
                let out = ch.apply_operator(rho.matrix())?.hermitian_part();
                let recovered = recovery.apply_operator(&out)?;
                fidelity_with_root(root, &recovered)
            })
            .collect()
    }

    pub fn estimate(
        &self,
        ch: &QuantumChannel<T>,
        strategy: &RecoveryStrategy<T>,
    ) -> Result<FidelityEstimate<T>> {
        let prepared = strategy.prepare(ch)?;
        Ok(FidelityEstimate::from_samples(
            &self.fidelities(ch, &prepared)?,
        ))
    }
}

/// Average fidelity between inputs and their recovered images.
pub fn mean_fidelity<T: Real>(
    ch: &QuantumChannel<T>,
    strategy: &RecoveryStrategy<T>,
    cfg: &SampleConfig,
) -> Result<FidelityEstimate<T>>
where
    StandardNormal: Distribution<T>,
{
    SampleSet::draw(cfg).estimate(ch, strategy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub p: T,
    pub q: T,
    pub estimate: FidelityEstimate<T>,
    pub is_optimal: bool,
    /// `false` when the Petz map was built on a rank-deficient `Λ(σ)`.
    pub full_support: bool,
}

/// Mean fidelity on a `(p, q)` grid, rows ordered by `p` then `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<T> {
    pub family: ChannelFamily,
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Real> SweepTable<T> {
    pub fn optimal_rows(&self) -> impl Iterator<Item = &SweepRow<T>> {
        self.rows.iter().filter(|r| r.is_optimal)
    }

    /// Optimal reference weight `q*` for each `p`, in grid order.
    pub fn optimal_q(&self) -> Vec<(T, T)> {
        self.optimal_rows().map(|r| (r.p, r.q)).collect()
    }

    pub fn rows_at(&self, p: T) -> impl Iterator<Item = &SweepRow<T>> {
        self.rows.iter().filter(move |r| r.p == p)
    }
}

pub(crate) fn check_grid<T: Real>(name: &'static str, grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Format(format!("{name} grid is empty")));
    }
    for &v in grid {
        check_range(name, v.to_f64_lossy(), 0.0, 1.0)?;
    }
    Ok(())
}

/// Sweeps the diagonal reference family over `q_grid` for each channel in
/// `p_grid`, reusing one sample set for every cell.
pub fn sweep_reference<T: Real>(
    family: ChannelFamily,
    p_grid: &[T],
    q_grid: &[T],
    cfg: &SampleConfig,
) -> Result<SweepTable<T>>
where
    StandardNormal: Distribution<T>,
{
    check_grid("p", p_grid)?;
    check_grid("q", q_grid)?;
    let samples = SampleSet::draw(cfg);
    sweep_with_samples(family, p_grid, q_grid, &samples)
}

pub fn sweep_with_samples<T: Real>(
    family: ChannelFamily,
    p_grid: &[T],
    q_grid: &[T],
    samples: &SampleSet<T>,
) -> Result<SweepTable<T>> {
    check_grid("p", p_grid)?;
    check_grid("q", q_grid)?;
    let tie = T::lit(ARGMAX_TIE_TOLERANCE);
    let mut rows = Vec::with_capacity(p_grid.len() * q_grid.len());
    for &p in p_grid {
        let ch = family.at(p)?;
        let start = rows.len();
        for &q in q_grid {
            let strategy = RecoveryStrategy::Petz(ReferenceState::new(q)?);
            let prepared = strategy.prepare(&ch)?;
            let estimate = FidelityEstimate::from_samples(&samples.fidelities(&ch, &prepared)?);
            rows.push(SweepRow {
                p,
                q,
                estimate,
                is_optimal: false,
                full_support: prepared.full_support(),
            });
        }
        let block = &mut rows[start..];
        let mut best = 0;
        for (i, row) in block.iter().enumerate() {
            let incumbent = &block[best];
            let better = row.estimate.mean > incumbent.estimate.mean + tie;
            let tied_lower =
                (row.estimate.mean - incumbent.estimate.mean).abs() <= tie && row.q < incumbent.q;
            if better || tied_lower {
                best = i;
            }
        }
        block[best].is_optimal = true;
    }
    Ok(SweepTable { family, rows })
}

/// The three recovery strategies compared against each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Identity,
    PetzOptimal,
    MaximallyMixed,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [
        StrategyKind::Identity,
        StrategyKind::PetzOptimal,
        StrategyKind::MaximallyMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Identity => "identity",
            StrategyKind::PetzOptimal => "petz_optimal",
            StrategyKind::MaximallyMixed => "maximally_mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRow<T> {
    pub p: T,
    pub strategy: StrategyKind,
    /// Reference weight used by the optimal Petz strategy.
    pub q_star: Option<T>,
    pub estimate: FidelityEstimate<T>,
}

/// Identity, optimal Petz and maximally-mixed recovery for each `p`. The Petz
/// reference weight is re-derived from a sweep over the same samples.
pub fn compare_strategies<T: Real>(
    family: ChannelFamily,
    p_grid: &[T],
    q_grid: &[T],
    cfg: &SampleConfig,
) -> Result<Vec<StrategyRow<T>>>
where
    StandardNormal: Distribution<T>,
{
    check_grid("p", p_grid)?;
    check_grid("q", q_grid)?;
    let samples = SampleSet::draw(cfg);
    let sweep = sweep_with_samples(family, p_grid, q_grid, &samples)?;
    let mut rows = Vec::with_capacity(3 * p_grid.len());
    for &p in p_grid {
        let ch = family.at(p)?;
        let best = sweep
            .rows_at(p)
            .find(|r| r.is_optimal)
            .expect("one optimum per p");
        for kind in StrategyKind::ALL {
            let (estimate, q_star) = match kind {
                StrategyKind::Identity => {
                    (samples.estimate(&ch, &RecoveryStrategy::Identity)?, None)
                }
                StrategyKind::MaximallyMixed => (
                    samples.estimate(&ch, &RecoveryStrategy::MaximallyMixed)?,
                    None,
                ),
                StrategyKind::PetzOptimal => (best.estimate, Some(best.q)),
            };
            rows.push(StrategyRow {
                p,
                strategy: kind,
                q_star,
                estimate,
            });
        }
    }
    Ok(rows)
}
