use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use petz_lab::channels::ChannelFamily;

#[derive(Parser, Debug)]
#[command(
    name = "petz-lab",
    version,
    about = "Petz recovery experiments for qubit noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mean recovery fidelity over the (p, q) grid of diagonal reference states
    Sweep,
    /// Identity, optimal Petz and maximally-mixed recovery side by side
    Strategies,
    /// Distinguishability of |+> and |-> under exact and approximated dynamics
    Backflow,
    /// Trace distance between Choi states of exact and approximated maps
    ChoiDistance,
    /// Negative-rate intervals and quadrature accuracy for a dephasing generator
    GeneratorCheck(GeneratorArgs),
    /// Export a noise channel as JSON, or validate a JSON channel file
    Channel(ChannelArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Noise family: dephasing, depolarizing or amplitude-damping
    #[arg(long, global = true)]
    pub channel: Option<ChannelFamily>,

    /// Dynamics case (1 or 2)
    #[arg(long, global = true, default_value_t = 1)]
    pub case: u8,

    /// Noise strengths as a:b:step
    #[arg(long, global = true, default_value = "0:1:0.05")]
    pub p_grid: Grid,

    /// Reference weights as a:b:step
    #[arg(long, global = true, default_value = "0:1:0.05")]
    pub q_grid: Grid,

    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Last time point, in units of 1/omega
    #[arg(long, global = true, default_value_t = 10.0)]
    pub t_max: f64,

    #[arg(long, global = true, default_value_t = 0.01)]
    pub dt: f64,

    /// Final-to-intermediate time ratio of the approximated map
    #[arg(long, global = true, default_value_t = 2.0)]
    pub ratio: f64,

    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Also write an SVG line plot next to each CSV
    #[arg(long, global = true)]
    pub svg: bool,
}

#[derive(Args, Debug, Clone)]
pub struct GeneratorArgs {
    /// Use a constant rate instead of the case's rate
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_const: Option<f64>,

    /// Absolute tolerance of the rate integral
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct ChannelArgs {
    /// Noise strength of the exported channel
    #[arg(long)]
    pub p: Option<f64>,

    /// Read and validate this JSON file instead of exporting
    #[arg(long, conflicts_with = "p")]
    pub from: Option<PathBuf>,
}

/// Evenly spaced values `a, a + step, …` not exceeding `b`, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{x}` is not a number"))
        };
        let values = match parts.as_slice() {
            [v] => vec![num(v)?],
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if !step.is_finite() || step <= 0.0 {
                    return Err(format!("step must be positive, got {step}"));
                }
                if !a.is_finite() || !b.is_finite() || b < a {
                    return Err(format!("empty range {a}:{b}"));
                }
                let n = ((b - a) / step + 1e-9).floor() as usize + 1;
                (0..n).map(|i| a + i as f64 * step).collect()
            }
            _ => return Err(format!("expected a:b:step, got `{s}`")),
        };
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(format!("value {v} is outside [0, 1]"));
        }
        Ok(Grid(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(
            "0:1:0.25".parse::<Grid>().unwrap().0,
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!("0:1:0.05".parse::<Grid>().unwrap().0.len(), 21);
        assert_eq!("0.4".parse::<Grid>().unwrap().0, vec![0.4]);
        assert_eq!("0:1:0.3".parse::<Grid>().unwrap().0.len(), 4);
        for bad in ["0:2:0.5", "0:1:0", "1:0:0.1", "a:b:c", "0:1", "-0.1"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }
}
