//! Amplitude estimation: simulation of the phase-estimation register and
//! post-processing of its measurements.
//!
//! A measured integer `y` maps to `a = sin^2(y pi / M)`. The values `y` and
//! `M - y` give the same estimate and are pooled.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::circuits::{amplitude_estimation_circuit, grover_operator, AEProblem, PowerRule};
use crate::error::{validation, Result};
use crate::qsim::{CountsMap, QuantumState};

/// Outcome of one amplitude-estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct AEResult {
    pub m: usize,
    /// Most frequent outcome, reported as the representative `y <= M/2`.
    pub modal_y: u64,
    /// `sin^2(modal_y pi / M)`.
    pub estimate: f64,
    /// Image of `[(y - 1) pi / M, (y + 1) pi / M]` under `sin^2`.
    pub interval: (f64, f64),
    /// Larger distance from `estimate` to an interval edge.
    pub half_width: f64,
    pub counts: CountsMap,
    pub shots: u64,
    pub seed: u64,
}

/// Flat CSV record of an [`AEResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AERecord {
    pub m: usize,
    #[serde(rename = "M")]
    pub samples: u64,
    pub modal_y: u64,
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
    pub shots: u64,
    pub seed: u64,
}

impl AEResult {
    pub fn samples(&self) -> u64 {
        1 << self.m
    }

    pub fn record(&self) -> AERecord {
        AERecord {
            m: self.m,
            samples: self.samples(),
            modal_y: self.modal_y,
            estimate: self.estimate,
            low: self.interval.0,
            high: self.interval.1,
            shots: self.shots,
            seed: self.seed,
        }
    }
}

/// `sin^2(y pi / M)`.
pub fn estimate_for(y: u64, m: usize) -> f64 {
    (y as f64 * PI / (1u64 << m) as f64).sin().powi(2)
}

/// Representative of `{y, M - y}`.
fn canonical(y: u64, m: usize) -> u64 {
    let big_m = 1u64 << m;
    let y = y % big_m;
    y.min(big_m - y)
}

/// Total weight per canonical outcome, indexed `0..=M/2`.
fn pooled(weights: impl Iterator<Item = (u64, f64)>, m: usize) -> Vec<f64> {
    let mut out = vec![0.0; (1usize << m) / 2 + 1];
    for (y, w) in weights {
        out[canonical(y, m) as usize] += w;
    }
    out
}

/// Index of the largest weight; ties go to the smaller index, which is
/// also the smaller estimate.
fn argmax(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = i;
        }
    }
    best
}

/// Modal estimate from measured counts of the evaluation register.
pub fn estimate_from_counts(counts: &CountsMap, m: usize, seed: u64) -> Result<AEResult> {
    if counts.counts.is_empty() || counts.shots == 0 {
        return validation("no measurements to estimate from");
    }
    let big_m = 1u64 << m;
    if let Some(&y) = counts.counts.keys().find(|&&y| y >= big_m) {
        return validation(format!("outcome {y} does not fit in {m} evaluation qubits"));
    }
    let weights = pooled(counts.counts.iter().map(|(&y, &c)| (y, c as f64)), m);
    let y = argmax(&weights) as u64;
    let (interval, half_width) = error_interval(y, m);
    Ok(AEResult {
        m,
        modal_y: y,
        estimate: estimate_for(y, m),
        interval,
        half_width,
        counts: counts.clone(),
        shots: counts.shots,
        seed,
    })
}

/// Modal outcome of an exact outcome distribution (the infinite-shot limit).
pub fn modal_from_probabilities(probs: &[f64], m: usize) -> u64 {
    argmax(&pooled(
        probs.iter().enumerate().map(|(y, &p)| (y as u64, p)),
        m,
    )) as u64
}

/// Confidence interval for outcome `y`: the `sin^2` image of
/// `[(y - 1) pi / M, (y + 1) pi / M]`, clamped to `[0, 1]`, and the larger of
/// the two distances from the estimate to its edges.
pub fn error_interval(y: u64, m: usize) -> ((f64, f64), f64) {
    let big_m = (1u64 << m) as f64;
    let lo_t = (y as f64 - 1.0) * PI / big_m;
    let hi_t = (y as f64 + 1.0) * PI / big_m;
    let f = |t: f64| t.sin().powi(2);
    let mut low = f(lo_t).min(f(hi_t));
    let mut high = f(lo_t).max(f(hi_t));
    // Extremes of sin^2 sit at multiples of pi / 2.
    let first = (lo_t / FRAC_PI_2).ceil() as i64;
    let last = (hi_t / FRAC_PI_2).floor() as i64;
    for k in first..=last {
        let v = f(k as f64 * FRAC_PI_2);
        low = low.min(v);
        high = high.max(v);
    }
    let low = low.clamp(0.0, 1.0);
    let high = high.clamp(0.0, 1.0);
    let a = estimate_for(y, m);
    ((low, high), (a - low).max(high - a))
}

/// Exact outcome distribution of the evaluation register.
///
/// The state after the controlled powers is `M^(-1/2) sum_y |y> Q^y A|0>`,
/// so the outcome amplitudes follow from the sequence `Q^y A|0>` and a
/// discrete Fourier transform over `y`. This is the same distribution as
/// simulating [`amplitude_estimation_circuit`], at a fraction of the cost.
pub fn qpe_probabilities(problem: &AEProblem) -> Result<Vec<f64>> {
    problem.validate()?;
    let big_m = problem.samples() as usize;
    let sequence: Vec<Vec<Complex64>> = match problem.powers {
        PowerRule::SingleQubitRy(theta) => (0..big_m)
            .map(|y| {
                let half = (2 * y + 1) as f64 * theta / 2.0;
                vec![
                    Complex64::new(half.cos(), 0.0),
                    Complex64::new(half.sin(), 0.0),
                ]
            })
            .collect(),
        PowerRule::Repeat => {
            let q = grover_operator(problem)?;
            let mut state = QuantumState::zero(problem.width());
            problem.a_circuit.apply(&mut state)?;
            let mut seq = Vec::with_capacity(big_m);
            for y in 0..big_m {
                if y > 0 {
                    q.apply(&mut state)?;
                }
                seq.push(state.amplitudes().to_vec());
            }
            seq
        }
    };
    let dim = sequence[0].len();
    let twiddle: Vec<Complex64> = (0..big_m)
        .map(|k| Complex64::from_polar(1.0 / big_m as f64, -2.0 * PI * k as f64 / big_m as f64))
        .collect();
    let mut probs = Vec::with_capacity(big_m);
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    for out in 0..big_m {
        acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for (y, psi) in sequence.iter().enumerate() {
            let w = twiddle[(out * y) % big_m];
            for (a, p) in acc.iter_mut().zip(psi) {
                *a += w * p;
            }
        }
        probs.push(acc.iter().map(|a| a.norm_sqr()).sum());
    }
    Ok(probs)
}

/// Outcome distribution from simulating the full circuit gate by gate.
pub fn qpe_probabilities_by_circuit(problem: &AEProblem) -> Result<Vec<f64>> {
    let circuit = amplitude_estimation_circuit(problem)?;
    let mut state = QuantumState::zero(circuit.num_qubits());
    circuit.apply(&mut state)?;
    let w = problem.width();
    let eval: Vec<usize> = (w..w + problem.m).collect();
    state.measure_probabilities(&eval)
}

/// Simulate amplitude estimation noiselessly and sample `shots` outcomes;
/// `shots = 0` takes the modal outcome of the exact distribution.
pub fn run_ae(problem: &AEProblem, shots: u64, seed: u64) -> Result<AEResult> {
    let probs = qpe_probabilities(problem)?;
    result_for(&probs, problem.m, shots, seed)
}

/// Sample `shots` outcomes from an exact distribution and estimate.
pub fn sample_result(probs: &[f64], m: usize, shots: u64, seed: u64) -> Result<AEResult> {
    let counts = CountsMap::sample(probs, Vec::new(), shots, seed)?;
    let counts = CountsMap {
        qubits: (0..m).collect(),
        ..counts
    };
    estimate_from_counts(&counts, m, seed)
}

/// Result in the infinite-shot limit: the modal outcome of the exact
/// distribution, with empty counts and `shots = 0`.
pub fn modal_result(probs: &[f64], m: usize) -> AEResult {
    let y = modal_from_probabilities(probs, m);
    let (interval, half_width) = error_interval(y, m);
    AEResult {
        m,
        modal_y: y,
        estimate: estimate_for(y, m),
        interval,
        half_width,
        counts: CountsMap {
            qubits: (0..m).collect(),
            counts: Default::default(),
            shots: 0,
        },
        shots: 0,
        seed: 0,
    }
}

/// Sampled result for `shots >= 1`, or [`modal_result`] for `shots = 0`.
pub fn result_for(probs: &[f64], m: usize, shots: u64, seed: u64) -> Result<AEResult> {
    if shots == 0 {
        Ok(modal_result(probs, m))
    } else {
        sample_result(probs, m, shots, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn counts(pairs: &[(u64, u64)], m: usize) -> CountsMap {
        CountsMap {
            qubits: (0..m).collect(),
            counts: pairs.iter().copied().collect::<BTreeMap<_, _>>(),
            shots: pairs.iter().map(|p| p.1).sum(),
        }
    }

    #[test]
    fn modal_estimates() {
        let r = estimate_from_counts(&counts(&[(2, 6000), (6, 2192)], 3), 3, 0).unwrap();
        assert!((r.estimate - 0.5).abs() < 1e-12);
        let r = estimate_from_counts(&counts(&[(0, 100)], 5), 5, 0).unwrap();
        assert_eq!(r.estimate, 0.0);
        let r = estimate_from_counts(&counts(&[(3, 50), (13, 40), (4, 60)], 4), 4, 0).unwrap();
        assert_eq!(r.modal_y, 3);
        assert!((r.estimate - 0.3087).abs() < 1e-4);
        assert!(estimate_from_counts(&counts(&[], 3), 3, 0).is_err());
        assert!(estimate_from_counts(&counts(&[(9, 1)], 3), 3, 0).is_err());
    }

    #[test]
    fn ties_prefer_smaller_estimate() {
        let r = estimate_from_counts(&counts(&[(1, 10), (2, 10)], 3), 3, 0).unwrap();
        assert_eq!(r.modal_y, 1);
    }

    #[test]
    fn interval_edges() {
        let ((lo, hi), _) = error_interval(0, 3);
        assert_eq!(lo, 0.0);
        assert!((hi - (PI / 8.0).sin().powi(2)).abs() < 1e-15);
        let ((lo, hi), hw) = error_interval(2, 3);
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        assert!((hw - (hi - 0.5)).abs() < 1e-12);
        let ((lo, hi), _) = error_interval(4, 3);
        assert_eq!(hi, 1.0);
        assert!(lo < 1.0);
    }

    #[test]
    fn fast_path_matches_circuit() {
        let theta = 2.0 * 0.3f64.sqrt().asin();
        let p = AEProblem::single_qubit(theta, 3).unwrap();
        let fast = qpe_probabilities(&p).unwrap();
        let slow = qpe_probabilities_by_circuit(&p).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
        let repeat = AEProblem {
            powers: PowerRule::Repeat,
            ..p
        };
        let general = qpe_probabilities(&repeat).unwrap();
        for (a, b) in general.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn run_is_deterministic() {
        let p = AEProblem::single_qubit(1.0, 4).unwrap();
        assert_eq!(run_ae(&p, 100, 5).unwrap(), run_ae(&p, 100, 5).unwrap());
    }
}
