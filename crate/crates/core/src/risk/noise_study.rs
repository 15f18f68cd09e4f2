//! Probability of the correct AE outcome under hardware noise.

use serde::Serialize;

use crate::ae::estimate_for;
use crate::circuits::{amplitude_estimation_circuit, decompose, AEProblem};
use crate::error::{validation, Result};
use crate::qsim::{run_noisy_event, Circuit, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseCell {
    pub gamma: f64,
    pub alpha: f64,
    /// Probability that the measured outcome maps to the target estimate.
    pub probability: f64,
    pub standard_error: f64,
    pub trajectories: usize,
}

/// The AE circuit of `problem` in single-qubit gates and CNOTs, with the
/// evaluation register at `[width, width + m)`.
pub fn noisy_ae_circuit(problem: &AEProblem) -> Result<Circuit> {
    decompose(&amplitude_estimation_circuit(problem)?)
}

/// `P[estimate = target]` for every `(gamma, alpha)` pair, ordered by gamma
/// then alpha. Every cell reuses `base.seed`.
pub fn noise_study(
    problem: &AEProblem,
    target: f64,
    gammas: &[f64],
    alphas: &[f64],
    base: NoiseModel,
) -> Result<Vec<NoiseCell>> {
    if gammas.is_empty() || alphas.is_empty() {
        return validation("noise study needs at least one gamma and one alpha");
    }
    let circuit = noisy_ae_circuit(problem)?;
    let m = problem.m;
    let eval: Vec<usize> = (problem.width()..problem.width() + m).collect();
    let hit = |y: usize| (estimate_for(y as u64, m) - target).abs() < 1e-9;
    let mut cells = Vec::with_capacity(gammas.len() * alphas.len());
    for &gamma in gammas {
        for &alpha in alphas {
            let noise = NoiseModel {
                gamma,
                alpha,
                ..base
            };
            let (probability, standard_error) = run_noisy_event(&circuit, &noise, &eval, hit)?;
            cells.push(NoiseCell {
                gamma,
                alpha,
                probability,
                standard_error,
                trajectories: if noise.damping_probability() > 0.0 {
                    noise.trajectories
                } else {
                    1
                },
            });
        }
    }
    Ok(cells)
}
