//! Command-line arguments and their range checks.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "qrisk",
    version,
    about = "Amplitude-estimation risk analysis experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// T-bill amplitude estimation for m = 1..M with outcome histograms and
    /// the quantum-versus-Monte-Carlo error table.
    Tbill(TbillArgs),
    /// Two-asset portfolio risk: PCA, discretization, and E/Var/VaR/CVaR by
    /// amplitude estimation, exact enumeration and Monte Carlo.
    Portfolio(PortfolioArgs),
    /// Probability of the exact estimate 0.5 over a relaxation and cross-talk grid.
    NoiseSweep(NoiseArgs),
    /// Median estimation error against the number of samples.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// RNG seed; every output is a pure function of the arguments and seed.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, default_value = "qrisk-out")]
    pub out: PathBuf,
    /// Write CNOT counts of the constructed circuits.
    #[arg(long)]
    pub report_gates: bool,
    /// Write the constructed circuits in text form.
    #[arg(long)]
    pub dump_circuit: bool,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct DataSource {
    /// CMT rate CSV with header `date,0.25,0.5,1,2,3,5,7,10,20,30`.
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
    /// Use the bundled synthetic rate series (the default without --data).
    #[arg(long)]
    pub synthetic: bool,
}

#[derive(Debug, Args)]
pub struct Encoding {
    /// Scaling of the objective encoding, in (0, 1].
    #[arg(long, default_value_t = 0.25, value_parser = unit_interval)]
    pub c: f64,
    /// Taylor order 2u + 1 of the encoding.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=6))]
    pub u: u32,
}

#[derive(Debug, Args)]
pub struct TbillArgs {
    /// Largest number of evaluation qubits.
    #[arg(long, default_value_t = 4, value_parser = evaluation_qubits)]
    pub m: usize,
    /// Measurement shots per run; 0 reports the most likely outcome.
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    /// Probability of no rate rise.
    #[arg(long, default_value_t = 0.3, value_parser = probability)]
    pub p: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PortfolioArgs {
    /// Largest number of evaluation qubits; reports cover m = 1..M.
    #[arg(long, default_value_t = 5, value_parser = evaluation_qubits)]
    pub m: usize,
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    /// VaR confidence level, in (0, 1).
    #[arg(long, default_value_t = 0.95, value_parser = open_unit_interval)]
    pub alpha: f64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub mc_samples: u64,
    /// Business days of synthetic data.
    #[arg(long, default_value_t = 5200, value_parser = clap::value_parser!(u64).range(3..))]
    pub days: u64,
    #[command(flatten)]
    pub encoding: Encoding,
    #[command(flatten)]
    pub data: DataSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// Evaluation qubits.
    #[arg(long, default_value_t = 2, value_parser = evaluation_qubits)]
    pub m: usize,
    /// Relaxation rates in ns^-1, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,1e-6,1e-5,3e-5,1e-4", value_parser = non_negative)]
    pub gamma: Vec<f64>,
    /// Cross-talk strengths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,-0.0075,-0.015,-0.0225,-0.03", allow_hyphen_values = true, value_parser = finite)]
    pub crosstalk: Vec<f64>,
    /// CNOT duration in ns.
    #[arg(long, default_value_t = 100.0, value_parser = positive)]
    pub t_cnot: f64,
    /// Trajectories per stochastic cell.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trajectories: u64,
    #[arg(long, default_value_t = 5200, value_parser = clap::value_parser!(u64).range(3..))]
    pub days: u64,
    #[command(flatten)]
    pub encoding: Encoding,
    #[command(flatten)]
    pub data: DataSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConvergenceProblem {
    /// The T-bill with fixed p.
    Tbill,
    /// A fresh uniform p per trial.
    Bernoulli,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    /// Largest number of evaluation qubits; rows cover m = 1..M (2..M for bernoulli).
    #[arg(long, default_value_t = 7, value_parser = evaluation_qubits)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub shots: u64,
    /// Runs per row.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = ConvergenceProblem::Bernoulli)]
    pub problem: ConvergenceProblem,
    /// T-bill probability.
    #[arg(long, default_value_t = 0.3, value_parser = probability)]
    pub p: f64,
    /// Taylor order 2u + 1; the scaling follows the optimal rule per M.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=6))]
    pub u: u32,
    #[command(flatten)]
    pub common: Common,
}

fn number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"))
}

fn finite(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    v.is_finite()
        .then_some(v)
        .ok_or_else(|| format!("{v} is not finite"))
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    (v >= 0.0)
        .then_some(v)
        .ok_or_else(|| format!("{v} is negative"))
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    (v > 0.0)
        .then_some(v)
        .ok_or_else(|| format!("{v} is not positive"))
}

fn probability(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    (0.0..=1.0)
        .contains(&v)
        .then_some(v)
        .ok_or_else(|| format!("{v} is outside [0, 1]"))
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    (v > 0.0 && v <= 1.0)
        .then_some(v)
        .ok_or_else(|| format!("{v} is outside (0, 1]"))
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    (v > 0.0 && v < 1.0)
        .then_some(v)
        .ok_or_else(|| format!("{v} is outside (0, 1)"))
}

fn evaluation_qubits(s: &str) -> Result<usize, String> {
    let v: usize = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    (1..=12)
        .contains(&v)
        .then_some(v)
        .ok_or_else(|| format!("{v} evaluation qubits is outside 1..=12"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ranges_are_checked() {
        assert!(Cli::try_parse_from(["qrisk", "tbill", "--m", "0"]).is_err());
        assert!(Cli::try_parse_from(["qrisk", "portfolio", "--alpha", "1"]).is_err());
        assert!(Cli::try_parse_from(["qrisk", "portfolio", "--c", "1.5"]).is_err());
        assert!(Cli::try_parse_from(["qrisk", "noise-sweep", "--gamma", "-1"]).is_err());
        assert!(
            Cli::try_parse_from(["qrisk", "portfolio", "--data", "x.csv", "--synthetic"]).is_err()
        );
        let ok = Cli::try_parse_from(["qrisk", "noise-sweep", "--crosstalk", "-0.01,0"]).unwrap();
        match ok.command {
            Command::NoiseSweep(a) => assert_eq!(a.crosstalk, vec![-0.01, 0.0]),
            _ => unreachable!(),
        }
    }
}
