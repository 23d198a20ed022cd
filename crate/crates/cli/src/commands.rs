use std::fs;

use petz_lab::channels::{ChannelFamily, QuantumChannel};
use petz_lab::nonmarkov::{
    backflow_trajectory, choi_distance_trajectory, first_revival, gamma_to_probability,
    markovianity_witness, time_grid, Trajectory,
};
use petz_lab::sampling::{compare_strategies, sweep_reference, SampleConfig, StrategyKind};
use petz_lab::{Channel, Dynamics, Generator, Point};

use crate::args::{ChannelArgs, GeneratorArgs, RunArgs};
use crate::error::CliError;
use crate::output::{ensure_dir, fmt_num, svg_path, write_csv, write_svg};
use crate::svg::{LinePlot, Series};

fn family(run: &RunArgs) -> Result<ChannelFamily, CliError> {
    run.channel
        .ok_or_else(|| CliError::Usage("--channel is required for this command".into()))
}

fn sample_config(run: &RunArgs) -> Result<SampleConfig, CliError> {
    Ok(SampleConfig::new(run.samples, run.seed)?)
}

fn dynamics(run: &RunArgs) -> Result<Dynamics, CliError> {
    Ok(Dynamics::case(run.case)?.with_ratio(run.ratio)?)
}

pub fn sweep(run: &RunArgs) -> Result<(), CliError> {
    let fam = family(run)?;
    let cfg = sample_config(run)?;
    ensure_dir(&run.out)?;
    let table = sweep_reference(fam, &run.p_grid.0, &run.q_grid.0, &cfg)?;

    for &p in &run.p_grid.0 {
        let singular: Vec<String> = table
            .rows_at(p)
            .filter(|r| !r.full_support)
            .map(|r| fmt_num(r.q))
            .collect();
        if !singular.is_empty() {
            eprintln!(
                "warning: p={}: channel output of the reference is singular for q in {{{}}}; \
                 the Petz map acts on its support only",
                fmt_num(p),
                singular.join(", ")
            );
        }
    }
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_num(r.p),
                fmt_num(r.q),
                fmt_num(r.estimate.mean),
                fmt_num(r.estimate.variance),
                fmt_num(r.estimate.stderr()),
                if r.is_optimal { "1" } else { "0" }.to_string(),
            ]
        })
        .collect();
    let path = run.out.join(format!("sweep_{}.csv", fam.name()));
    write_csv(
        &path,
        &["p", "q", "mean", "variance", "stderr", "is_optimal"],
        &rows,
    )?;

    if run.svg {
        let series: Vec<Series> = run
            .p_grid
            .0
            .iter()
            .map(|&p| Series {
                name: format!("p = {}", fmt_num(p)),
                points: table.rows_at(p).map(|r| (r.q, r.estimate.mean)).collect(),
            })
            .collect();
        let plot = LinePlot::new(
            &format!("{fam}: mean fidelity vs reference weight"),
            "q",
            "mean fidelity",
        );
        write_svg(&svg_path(&path), &plot, &series)?;
    }
    Ok(())
}

pub fn strategies(run: &RunArgs) -> Result<(), CliError> {
    let fam = family(run)?;
    let cfg = sample_config(run)?;
    ensure_dir(&run.out)?;
    let table = compare_strategies(fam, &run.p_grid.0, &run.q_grid.0, &cfg)?;
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            vec![
                fmt_num(r.p),
                r.strategy.name().to_string(),
                fmt_num(r.estimate.mean),
                fmt_num(r.estimate.variance),
                fmt_num(r.estimate.stderr()),
            ]
        })
        .collect();
    let path = run.out.join(format!("strategies_{}.csv", fam.name()));
    write_csv(
        &path,
        &["p", "strategy", "mean", "variance", "stderr"],
        &rows,
    )?;

    if run.svg {
        let series: Vec<Series> = StrategyKind::ALL
            .iter()
            .map(|&kind| Series {
                name: kind.name().into(),
                points: table
                    .iter()
                    .filter(|r| r.strategy == kind)
                    .map(|r| (r.p, r.estimate.mean))
                    .collect(),
            })
            .collect();
        let plot = LinePlot::new(&format!("{fam}: recovery strategies"), "p", "mean fidelity");
        write_svg(&svg_path(&path), &plot, &series)?;
    }
    Ok(())
}

fn trajectory_rows(points: &[Point]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|p| vec![fmt_num(p.t), fmt_num(p.value)])
        .collect()
}

fn series(name: &str, points: &[Point]) -> Series {
    Series {
        name: name.into(),
        points: points.iter().map(|p| (p.t, p.value)).collect(),
    }
}

pub fn backflow(run: &RunArgs) -> Result<(), CliError> {
    let model = dynamics(run)?;
    let grid = time_grid(run.t_max, run.dt)?;
    ensure_dir(&run.out)?;
    let mut all = Vec::new();
    for which in [Trajectory::Original, Trajectory::Approx] {
        let traj = backflow_trajectory(&model, which, &grid)?;
        let path = run
            .out
            .join(format!("backflow_case{}_{}.csv", run.case, which.name()));
        write_csv(&path, &["t_omega", "value"], &trajectory_rows(&traj))?;
        match first_revival(&traj) {
            Some(r) => println!(
                "{}: first revival {} -> {} (t_omega {} -> {})",
                which.name(),
                fmt_num(r.trough_value),
                fmt_num(r.peak_value),
                fmt_num(traj[r.trough].t),
                fmt_num(traj[r.peak].t)
            ),
            None => println!("{}: no revival", which.name()),
        }
        all.push(series(which.name(), &traj));
    }
    if run.svg {
        let path = run.out.join(format!("backflow_case{}.svg", run.case));
        let plot = LinePlot::new(
            &format!("case {}: distinguishability of |+> and |->", run.case),
            "omega t",
            "trace distance",
        );
        write_svg(&path, &plot, &all)?;
    }
    Ok(())
}

pub fn choi_distance(run: &RunArgs) -> Result<(), CliError> {
    let model = dynamics(run)?;
    let grid = time_grid(run.t_max, run.dt)?;
    ensure_dir(&run.out)?;
    let traj = choi_distance_trajectory(&model, &grid)?;
    let path = run.out.join(format!("choi_distance_case{}.csv", run.case));
    write_csv(&path, &["t_omega", "value"], &trajectory_rows(&traj))?;
    if run.svg {
        let plot = LinePlot::new(
            &format!("case {}: Choi-state distance", run.case),
            "omega t",
            "distance",
        );
        write_svg(&svg_path(&path), &plot, &[series("approx vs exact", &traj)])?;
    }
    Ok(())
}

pub fn generator_check(run: &RunArgs, args: &GeneratorArgs) -> Result<(), CliError> {
    let (generator, description) = match args.gamma_const {
        Some(c) => (
            Generator::constant(c),
            format!("constant rate {}", fmt_num(c)),
        ),
        None => match run.case {
            1 => (Generator::sine(), "case 1, gamma(t) = sin t".to_string()),
            2 => (
                Generator::oscillatory(),
                "case 2, gamma(t) = cos t (-0.3 cos t - 2 sin t) / (e^(0.3 t) - 2 cos^2 t)"
                    .to_string(),
            ),
            n => return Err(CliError::Usage(format!("--case must be 1 or 2, got {n}"))),
        },
    };
    let grid = time_grid(run.t_max, run.dt)?;
    let witness = markovianity_witness(&generator, &grid)?;

    println!("model: {description}");
    println!(
        "grid: [0, {}] step {} ({} points)",
        fmt_num(run.t_max),
        fmt_num(run.dt),
        grid.len()
    );
    if witness.is_markovian() {
        println!("Markovian: no negative intervals");
    } else {
        println!(
            "non-Markovian: {} negative-rate interval(s)",
            witness.intervals.len()
        );
        for iv in &witness.intervals {
            println!("  [{}, {}]", fmt_num(iv.start), fmt_num(iv.end));
        }
    }
    if !witness.singular.is_empty() {
        let shown: Vec<String> = witness
            .singular
            .iter()
            .take(10)
            .map(|&t| fmt_num(t))
            .collect();
        println!(
            "rate not finite at {} grid point(s): {}",
            witness.singular.len(),
            shown.join(", ")
        );
    }

    let sine = Generator::sine();
    let mut max_dev = 0.0f64;
    for &t in &grid {
        let quad = gamma_to_probability(&sine, t, args.quad_tol)?;
        let exact = 0.5 * (1.0 - (-2.0 * (1.0 - t.cos())).exp());
        max_dev = max_dev.max((quad - exact).abs());
    }
    println!(
        "max |p_quadrature - p_closed_form| for gamma = sin t: {}",
        fmt_num(max_dev)
    );
    Ok(())
}

pub fn channel(run: &RunArgs, args: &ChannelArgs) -> Result<(), CliError> {
    if let Some(path) = &args.from {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let ch = Channel::from_json(&text).map_err(|e| CliError::Usage(e.to_string()))?;
        println!(
            "valid channel `{}`: dimension {}, {} Kraus operators, trace-preservation error {}",
            ch.label(),
            ch.dim(),
            ch.kraus().len(),
            fmt_num(ch.trace_preservation_error())
        );
        return Ok(());
    }
    let fam = family(run)?;
    let p = args
        .p
        .ok_or_else(|| CliError::Usage("--p or --from is required".into()))?;
    let ch: QuantumChannel<f64> = fam.at(p)?;
    println!("{}", ch.to_json());
    Ok(())
}
