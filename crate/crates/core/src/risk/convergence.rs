//! Error of amplitude estimation against Monte Carlo as the sample count grows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::montecarlo::monte_carlo_baseline;
use super::oracle::moments;
use super::problems::expectation_problem;
use crate::ae::{qpe_probabilities, result_for};
use crate::approx::{scaling_for_samples, unmap, ApproxParams};
use crate::circuits::{AEProblem, AffineGrid, BinaryPolynomial, DiscreteDistribution};
use crate::error::{validation, Result};
use crate::seed::derive;

const TAG_PROBLEM: u64 = 11;

/// How the scaling `c` is chosen for each `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingRule {
    Fixed(ApproxParams),
    /// `c` from [`scaling_for_samples`] at order `u`.
    Optimal {
        u: usize,
    },
}

impl ScalingRule {
    fn params(&self, samples: u64) -> ApproxParams {
        match *self {
            ScalingRule::Fixed(p) => p,
            ScalingRule::Optimal { u } => ApproxParams::new(scaling_for_samples(samples, u).c, u),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StudyProblem {
    /// `A = Ry(2 asin(sqrt(p)))`; the error is `|a - p|`.
    TBill { p: f64 },
    /// A fresh `p ~ U(0, 1)` per trial, shared across `m`, loaded as a
    /// one-qubit distribution with `f(x) = x`; the error is `|E - p|`.
    RandomBernoulli { scaling: ScalingRule },
    /// A fixed distribution and objective; the error is `|E - E[f(X)]|`.
    Fixed {
        dist: DiscreteDistribution,
        f: BinaryPolynomial,
        scaling: ScalingRule,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceConfig {
    pub problem: StudyProblem,
    pub m_range: Vec<usize>,
    pub trials: usize,
    /// Shots per AE run; 0 takes the exact modal outcome.
    pub shots: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    #[serde(rename = "M")]
    pub samples: u64,
    /// Median absolute error of the quantum estimate.
    pub quantum_error: f64,
    /// Median absolute error of the `M`-sample Monte Carlo mean.
    pub mc_error: f64,
    /// Median optimistic Monte Carlo half-width `1.96 sigma / sqrt(M)`.
    pub mc_half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Log-log slope of `quantum_error` against `M`.
    pub quantum_slope: Option<f64>,
    /// Log-log slope of `mc_error` against `M`.
    pub mc_slope: Option<f64>,
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive `y`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// One trial's problem: AE problem, how to read the estimate, the exact
/// value, and the Monte Carlo source.
struct Cell {
    problem: AEProblem,
    c: Option<f64>,
    exact: f64,
    dist: DiscreteDistribution,
    f: BinaryPolynomial,
}

fn bernoulli(p: f64) -> DiscreteDistribution {
    DiscreteDistribution::new(vec![1.0 - p, p], AffineGrid::index()).expect("valid Bernoulli")
}

fn cell(problem: &StudyProblem, m: usize, trial_p: f64) -> Result<Cell> {
    let samples = 1u64 << m;
    Ok(match problem {
        StudyProblem::TBill { p } => Cell {
            problem: AEProblem::single_qubit(2.0 * p.sqrt().asin(), m)?,
            c: None,
            exact: *p,
            dist: bernoulli(*p),
            f: BinaryPolynomial::bit(0),
        },
        StudyProblem::RandomBernoulli { scaling } => {
            let dist = bernoulli(trial_p);
            let f = BinaryPolynomial::bit(0);
            let params = scaling.params(samples);
            Cell {
                problem: expectation_problem(&dist, &f, &params, m)?,
                c: Some(params.c),
                exact: trial_p,
                dist,
                f,
            }
        }
        StudyProblem::Fixed { dist, f, scaling } => {
            let params = scaling.params(samples);
            Cell {
                problem: expectation_problem(dist, f, &params, m)?,
                c: Some(params.c),
                exact: moments(dist, f).0,
                dist: dist.clone(),
                f: f.clone(),
            }
        }
    })
}

/// Quantum error, Monte Carlo error and Monte Carlo half-width of one trial.
fn run_trial(
    cell: &Cell,
    probs: &[f64],
    m: usize,
    shots: u64,
    seed: u64,
    trial: u64,
) -> Result<(f64, f64, f64)> {
    let ae = result_for(probs, m, shots, derive(seed, 2 * m as u64, trial))?;
    let estimate = match cell.c {
        Some(c) => unmap(ae.estimate, c).clamp(0.0, 1.0),
        None => ae.estimate,
    };
    let mc = monte_carlo_baseline(
        &cell.dist,
        &cell.f,
        1 << m,
        derive(seed, 2 * m as u64 + 1, trial),
    )?;
    Ok((
        (estimate - cell.exact).abs(),
        (mc.estimate - cell.exact).abs(),
        mc.half_width,
    ))
}

/// Median errors per `m` over `trials` seeded runs, with fitted slopes.
pub fn convergence_study(config: &ConvergenceConfig) -> Result<ConvergenceTable> {
    if config.m_range.is_empty() {
        return validation("convergence study needs at least one m");
    }
    if config.trials == 0 {
        return validation("convergence study needs at least one trial");
    }
    let trial_ps: Vec<f64> = (0..config.trials as u64)
        .map(|t| ChaCha8Rng::seed_from_u64(derive(config.seed, TAG_PROBLEM, t)).random::<f64>())
        .collect();
    let per_trial = matches!(config.problem, StudyProblem::RandomBernoulli { .. });
    let mut rows = Vec::with_capacity(config.m_range.len());
    for &m in &config.m_range {
        let shared = if per_trial {
            None
        } else {
            let c = cell(&config.problem, m, 0.0)?;
            let probs = qpe_probabilities(&c.problem)?;
            Some((c, probs))
        };
        let results: Vec<(f64, f64, f64)> = (0..config.trials)
            .into_par_iter()
            .map(|t| match &shared {
                Some((c, probs)) => run_trial(c, probs, m, config.shots, config.seed, t as u64),
                None => {
                    let c = cell(&config.problem, m, trial_ps[t])?;
                    let probs = qpe_probabilities(&c.problem)?;
                    run_trial(&c, &probs, m, config.shots, config.seed, t as u64)
                }
            })
            .collect::<Result<_>>()?;
        let column = |k: usize| -> Vec<f64> {
            results
                .iter()
                .map(|r| match k {
                    0 => r.0,
                    1 => r.1,
                    _ => r.2,
                })
                .collect()
        };
        rows.push(ConvergenceRow {
            m,
            samples: 1 << m,
            quantum_error: median(&column(0)),
            mc_error: median(&column(1)),
            mc_half_width: median(&column(2)),
        });
    }
    let fit = |g: fn(&ConvergenceRow) -> f64| {
        log_log_slope(
            &rows
                .iter()
                .map(|r| (r.samples as f64, g(r)))
                .collect::<Vec<_>>(),
        )
    };
    let quantum_slope = fit(|r| r.quantum_error);
    let mc_slope = fit(|r| r.mc_error);
    Ok(ConvergenceTable {
        rows,
        quantum_slope,
        mc_slope,
    })
}
