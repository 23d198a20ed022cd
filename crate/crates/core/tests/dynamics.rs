use std::f64::consts::PI;

use petz_lab::channels::dephasing;
use petz_lab::nonmarkov::{
    backflow_trajectory, choi_distance_trajectory, first_revival, gamma_to_probability,
    has_backflow, markovianity_witness, max_revival_height, time_grid, Trajectory,
    DEFAULT_QUAD_TOLERANCE,
};
use petz_lab::{Dynamics, Generator, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHA: f64 = 1.018_657_360_363_774_3; // e⁴/(e⁴ − 1)

fn p1(wt: f64) -> f64 {
    ALPHA * (1.0 - (-2.0 * (1.0 - wt.cos())).exp())
}

fn p2(wt: f64) -> f64 {
    1.0 - (-0.3 * wt).exp() * wt.cos().powi(2)
}

type ClosedForm = fn(f64) -> f64;

fn cases() -> [(Dynamics, ClosedForm); 2] {
    [(Dynamics::case1(), p1), (Dynamics::case2(), p2)]
}

fn values(points: &[Point]) -> Vec<f64> {
    points.iter().map(|p| p.value).collect()
}

#[test]
fn alpha_constant() {
    let e4 = 4f64.exp();
    assert!((ALPHA - e4 / (e4 - 1.0)).abs() < 1e-15);
}

#[test]
fn closed_forms_on_random_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut grid: Vec<f64> = (0..1000).map(|_| rng.random_range(0.0..10.0)).collect();
    grid.sort_by(f64::total_cmp);
    for (model, p) in cases() {
        let orig = backflow_trajectory(&model, Trajectory::Original, &grid).unwrap();
        let approx = backflow_trajectory(&model, Trajectory::Approx, &grid).unwrap();
        let choi = choi_distance_trajectory(&model, &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let (pt, p2t) = (p(t), p(2.0 * t));
            assert!((orig[i].value - (1.0 - p2t)).abs() < 1e-9);
            assert!((approx[i].value - (1.0 - p2t) * (1.0 - pt).powi(2)).abs() < 1e-9);
            let expected = 0.5 * (1.0 - p2t) * (1.0 - (1.0 - pt).powi(2));
            assert!((choi[i].value - expected).abs() < 1e-9);
        }
    }
}

#[test]
fn probability_examples() {
    let (c1, c2) = (Dynamics::case1(), Dynamics::case2());
    assert_eq!(c1.p(0.0), 0.0);
    assert!((c1.p(PI) - 1.0).abs() < 1e-14);
    assert!(c1.p(2.0 * PI).abs() < 1e-14);
    assert_eq!(c2.p(0.0), 0.0);
    assert!((c2.p(PI / 2.0) - 1.0).abs() < 1e-15);
    assert!((c2.p(PI) - (1.0 - (-0.3 * PI).exp())).abs() < 1e-15);
}

#[test]
fn approx_map_coherence_factor() {
    for (model, p) in cases() {
        for t in [0.0, 0.4, 1.3, PI, 4.4, 9.0] {
            let factor = (1.0 - p(2.0 * t)) * (1.0 - p(t)).powi(2);
            let expected = dephasing(1.0 - factor).unwrap();
            let approx = model.approx_map(t).unwrap();
            assert!(approx.same_map(&expected), "t = {t}");
            assert!(approx.trace_preservation_error() < 1e-10);
            assert!(approx.choi().is_positive(1e-10));
        }
    }
}

#[test]
fn backflow_examples() {
    let m = Dynamics::case1();
    let traj = backflow_trajectory(&m, Trajectory::Original, &[0.0, PI / 2.0]).unwrap();
    assert!((traj[0].value - 1.0).abs() < 1e-12);
    assert!(traj[1].value.abs() < 1e-12);
    let choi = choi_distance_trajectory(&m, &[0.0, PI]).unwrap();
    assert!(choi[0].value.abs() < 1e-12);
    assert!((choi[1].value - 0.5).abs() < 1e-12);
}

#[test]
fn non_markovianity_survives_but_is_attenuated() {
    let grid = time_grid(10.0, 0.01).unwrap();
    for (model, _) in cases() {
        let orig = backflow_trajectory(&model, Trajectory::Original, &grid).unwrap();
        let approx = backflow_trajectory(&model, Trajectory::Approx, &grid).unwrap();
        assert!(has_backflow(&orig));
        assert!(has_backflow(&approx));
        assert!(max_revival_height(&approx) <= max_revival_height(&orig) + 1e-12);
    }

    let m = Dynamics::case1();
    let orig = backflow_trajectory(&m, Trajectory::Original, &grid).unwrap();
    let approx = backflow_trajectory(&m, Trajectory::Approx, &grid).unwrap();
    let (ro, ra) = (
        first_revival(&orig).unwrap(),
        first_revival(&approx).unwrap(),
    );
    assert!(ro.peak_value > 0.99);
    assert!(ra.peak_value < 0.2 * ro.peak_value);
}

#[test]
fn case2_approx_revives_but_stays_small_after_first_zero() {
    // D_approx ≤ D_orig = e^{-0.6t}cos²(2t), which peaks at e^{-0.3π} ≈ 0.398 after t = π/4
    let grid = time_grid(10.0, 0.01).unwrap();
    let approx = backflow_trajectory(&Dynamics::case2(), Trajectory::Approx, &grid).unwrap();
    let after: Vec<Point> = approx.into_iter().filter(|p| p.t > PI / 4.0).collect();
    let peak = after.iter().map(|p| p.value).fold(0.0, f64::max);
    assert!(peak < 0.5);
    assert!((peak - 0.024_47).abs() < 1e-4, "{peak}");
    assert!(has_backflow(&after));
}

#[test]
fn monotone_dynamics_never_revives() {
    let m = Dynamics::custom(|t: f64| 0.5 * (1.0 - (-t).exp()));
    let grid = time_grid(10.0, 0.01).unwrap();
    for which in [Trajectory::Original, Trajectory::Approx] {
        let traj = backflow_trajectory(&m, which, &grid).unwrap();
        let v = values(&traj);
        assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
    let still = Dynamics::custom(|_| 0.0);
    let zeros = choi_distance_trajectory(&still, &grid).unwrap();
    assert!(zeros.iter().all(|p| p.value.abs() < 1e-12));
}

#[test]
fn quadrature_matches_sine_closed_form() {
    let gen = Generator::sine();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let t: f64 = rng.random_range(0.0..4.0 * PI);
        let quad = gamma_to_probability(&gen, t, DEFAULT_QUAD_TOLERANCE).unwrap();
        let exact = 0.5 * (1.0 - (-2.0 * (1.0 - t.cos())).exp());
        assert!(
            (quad - exact).abs() < DEFAULT_QUAD_TOLERANCE + 1e-12,
            "t = {t}"
        );
    }
}

#[test]
fn quadrature_examples() {
    let zero = Generator::constant(0.0);
    let half = Generator::constant(0.5);
    for t in [0.0, 1.0, 3.3] {
        assert_eq!(gamma_to_probability(&zero, t, 1e-10).unwrap(), 0.0);
        let exact = 0.5 * (1.0 - (-t).exp());
        assert!((gamma_to_probability(&half, t, 1e-10).unwrap() - exact).abs() < 1e-12);
    }
}

#[test]
fn witness_tracks_sign_of_sine() {
    let dt = 0.01;
    let grid = time_grid(4.0 * PI, dt).unwrap();
    let w = markovianity_witness(&Generator::sine(), &grid).unwrap();
    assert_eq!(w.intervals.len(), 2);
    for (iv, (a, b)) in w
        .intervals
        .iter()
        .zip([(PI, 2.0 * PI), (3.0 * PI, 4.0 * PI)])
    {
        assert!((iv.start - a).abs() <= dt && (iv.end - b).abs() <= dt);
    }
    for &t in &grid {
        let inside = w.intervals.iter().any(|iv| iv.start <= t && t <= iv.end);
        assert_eq!(inside, t.sin() < -1e-12, "t = {t}");
    }
    assert!(markovianity_witness(&Generator::constant(1.0), &grid)
        .unwrap()
        .is_markovian());
    let all = markovianity_witness(&Generator::constant(-1.0), &grid).unwrap();
    assert_eq!(all.intervals.len(), 1);
    assert_eq!(all.intervals[0].start, 0.0);
    assert_eq!(all.intervals[0].end, *grid.last().unwrap());
}
