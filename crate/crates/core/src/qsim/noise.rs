//! Trajectory simulation of amplitude damping and CNOT cross-talk.
//!
//! Only CNOTs take time. After every CNOT each qubit relaxes with
//! probability `1 - exp(-gamma * t_cnot)`, sampled as a Kraus branch on the
//! statevector. With cross-talk the CNOT is generated by
//! `exp(-i pi (ZX + alpha ZZ) / 4)` on (control, target), followed by the fixed
//! local frame `Sdg (x) Rx(-pi/2)` that turns the `alpha = 0` case into an
//! exact CNOT.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::circuit::Circuit;
use super::gate::{Gate, Matrix2};
use super::state::{check_measured, QuantumState};
use crate::error::{validation, Error, Result};

/// Parameters of the hardware noise model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Relaxation rate in ns^-1.
    pub gamma: f64,
    /// CNOT duration in ns.
    pub t_cnot: f64,
    /// Relative strength of the ZZ cross-talk term.
    pub alpha: f64,
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> NoiseModel {
        NoiseModel {
            gamma: 0.0,
            t_cnot: 100.0,
            alpha: 0.0,
            trajectories: 1000,
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return validation(format!("gamma must be non-negative, got {}", self.gamma));
        }
        if !(self.t_cnot > 0.0 && self.t_cnot.is_finite()) {
            return validation(format!("t_cnot must be positive, got {}", self.t_cnot));
        }
        if !self.alpha.is_finite() {
            return validation("cross-talk alpha must be finite");
        }
        if self.trajectories == 0 {
            return validation("trajectories must be at least 1");
        }
        Ok(())
    }

    /// Relaxation probability per qubit per CNOT.
    pub fn damping_probability(&self) -> f64 {
        1.0 - (-self.gamma * self.t_cnot).exp()
    }

    fn is_stochastic(&self) -> bool {
        self.damping_probability() > 0.0
    }
}

/// Trajectory-averaged outcome distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyResult {
    /// Probability of each measured value, `qubits[0]` least significant.
    pub probabilities: Vec<f64>,
    /// Standard error of each entry of `probabilities`.
    pub standard_errors: Vec<f64>,
    /// Number of trajectories actually run (1 when the model is deterministic).
    pub trajectories: usize,
}

/// Average the Born distribution of `measured` over noisy trajectories.
///
/// The circuit may contain only uncontrolled single-qubit gates and CNOTs;
/// decompose larger gates first.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel, measured: &[usize]) -> Result<NoisyResult> {
    let per_traj = trajectory_probabilities(circuit, noise, measured)?;
    let trajectories = per_traj.len();
    let k = 1usize << measured.len();
    let mut probabilities = Vec::with_capacity(k);
    let mut standard_errors = Vec::with_capacity(k);
    for outcome in 0..k {
        let (mean, se) = mean_and_error(per_traj.iter().map(|p| p[outcome]), trajectories);
        probabilities.push(mean);
        standard_errors.push(se);
    }
    Ok(NoisyResult {
        probabilities,
        standard_errors,
        trajectories,
    })
}

/// Trajectory-averaged probability that the measured value satisfies
/// `event`, with its standard error.
pub fn run_noisy_event(
    circuit: &Circuit,
    noise: &NoiseModel,
    measured: &[usize],
    event: impl Fn(usize) -> bool,
) -> Result<(f64, f64)> {
    let per_traj = trajectory_probabilities(circuit, noise, measured)?;
    let n = per_traj.len();
    let hits = per_traj.iter().map(|p| {
        p.iter()
            .enumerate()
            .filter(|(y, _)| event(*y))
            .map(|(_, v)| v)
            .sum::<f64>()
    });
    Ok(mean_and_error(hits, n))
}

fn mean_and_error(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let count = n as f64;
    let mean = values.clone().sum::<f64>() / count;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (count - 1.0) / count).sqrt())
}

/// Born distribution of `measured` at the end of each trajectory, in
/// trajectory order.
fn trajectory_probabilities(
    circuit: &Circuit,
    noise: &NoiseModel,
    measured: &[usize],
) -> Result<Vec<Vec<f64>>> {
    noise.validate()?;
    check_measured(measured, circuit.num_qubits())?;
    for g in circuit.gates() {
        let single = g.controls.is_empty() && g.targets.len() == 1;
        if !(single || g.is_cnot()) {
            return Err(Error::Unsupported(format!(
                "noisy simulation needs single-qubit gates and CNOTs, found {g}"
            )));
        }
    }
    let runner = Runner::new(circuit, noise);
    let trajectories = if noise.is_stochastic() {
        noise.trajectories
    } else {
        1
    };
    Ok((0..trajectories)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
            rng.set_stream(t as u64);
            let state = runner.run(&mut rng);
            state
                .measure_probabilities(measured)
                .expect("measured qubits checked")
        })
        .collect())
}

struct Runner<'a> {
    circuit: &'a Circuit,
    gamma_c: f64,
    crosstalk: Option<(Matrix2, Matrix2)>,
    /// `(1 - gamma_c)^(k / 2)`, the no-jump amplitude factor for `k` excited qubits.
    keep: Vec<f64>,
}

impl<'a> Runner<'a> {
    fn new(circuit: &'a Circuit, noise: &NoiseModel) -> Runner<'a> {
        let gamma_c = noise.damping_probability();
        let keep = (0..=circuit.num_qubits())
            .map(|k| (1.0 - gamma_c).powf(k as f64 / 2.0))
            .collect();
        let crosstalk = (noise.alpha != 0.0).then(|| crosstalk_blocks(noise.alpha));
        Runner {
            circuit,
            gamma_c,
            crosstalk,
            keep,
        }
    }

    fn run(&self, rng: &mut ChaCha8Rng) -> QuantumState {
        let mut state = QuantumState::zero(self.circuit.num_qubits());
        for g in self.circuit.gates() {
            if g.is_cnot() {
                self.apply_cnot(&mut state, g);
                if self.gamma_c > 0.0 {
                    self.damp_all(&mut state, rng);
                }
            } else {
                state.apply_gate_unchecked(g);
            }
        }
        state
    }

    fn apply_cnot(&self, state: &mut QuantumState, g: &Gate) {
        match &self.crosstalk {
            None => state.apply_gate_unchecked(g),
            Some((m0, m1)) => {
                let (c, t) = (g.controls[0], g.targets[0]);
                let cbit = 1usize << c;
                // Apply m0 where the control is 0 and m1 where it is 1.
                state.apply_matrix(m1, t, &[c], cbit);
                flip(state, c);
                state.apply_matrix(m0, t, &[c], cbit);
                flip(state, c);
            }
        }
    }

    /// One relaxation step on every qubit.
    fn damp_all(&self, state: &mut QuantumState, rng: &mut ChaCha8Rng) {
        let amps = state.amplitudes();
        let p_none: f64 = amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.keep[i.count_ones() as usize].powi(2))
            .sum();
        let r: f64 = rng.random();
        if r < p_none {
            let scale = 1.0 / p_none.sqrt();
            for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
                *a *= self.keep[i.count_ones() as usize] * scale;
            }
            return;
        }
        // At least one qubit relaxes. Walk the qubits, conditioning on a jump
        // occurring among those not yet visited until the first one fires.
        let n = state.num_qubits();
        let mut jumped = false;
        for q in 0..n {
            let p1 = excited_probability(state, q);
            let p_jump = self.gamma_c * p1;
            let threshold = if jumped {
                p_jump
            } else {
                let rest_none = no_jump_probability(state, q, self.gamma_c);
                p_jump / (1.0 - rest_none).max(f64::MIN_POSITIVE)
            };
            if rng.random::<f64>() < threshold {
                relax(state, q);
                jumped = true;
            } else {
                keep(state, q, self.gamma_c);
            }
        }
    }
}

fn flip(state: &mut QuantumState, q: usize) {
    state.apply_gate_unchecked(&Gate::x(q));
}

fn excited_probability(state: &QuantumState, q: usize) -> f64 {
    let bit = 1usize << q;
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Probability that none of the qubits `q..` relaxes.
fn no_jump_probability(state: &QuantumState, q: usize, gamma_c: f64) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() * (1.0 - gamma_c).powi((i >> q).count_ones() as i32))
        .sum()
}

/// Kraus operator `sqrt(gamma) |0><1|` on qubit `q`, renormalized.
fn relax(state: &mut QuantumState, q: usize) {
    let bit = 1usize << q;
    let amps = state.amplitudes_mut();
    for i in 0..amps.len() {
        if i & bit == 0 {
            amps[i] = amps[i | bit];
            amps[i | bit] = Complex64::new(0.0, 0.0);
        }
    }
    state.renormalize();
}

/// Kraus operator `diag(1, sqrt(1 - gamma))` on qubit `q`, renormalized.
fn keep(state: &mut QuantumState, q: usize, gamma_c: f64) {
    let bit = 1usize << q;
    let s = (1.0 - gamma_c).sqrt();
    for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if i & bit != 0 {
            *a *= s;
        }
    }
    state.renormalize();
}

/// Target-qubit blocks of the framed cross-talk CNOT, for control 0 and 1.
pub fn crosstalk_blocks(alpha: f64) -> (Matrix2, Matrix2) {
    use std::f64::consts::FRAC_PI_4;
    let r = (1.0 + alpha * alpha).sqrt();
    let (s, c) = (FRAC_PI_4 * r).sin_cos();
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    // exp(-i pi (X + alpha Z) / 4) and its adjoint.
    let v = [
        c * one - i * (s * alpha / r),
        -i * (s / r),
        -i * (s / r),
        c * one + i * (s * alpha / r),
    ];
    let vd = [v[0].conj(), v[2].conj(), v[1].conj(), v[3].conj()];
    // Rx(-pi/2) = exp(i pi X / 4).
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rx = [Complex64::new(h, 0.0), i * h, i * h, Complex64::new(h, 0.0)];
    let m0 = mul(&rx, &v);
    let m1 = mul(&rx, &vd).map(|z| -i * z);
    (m0, m1)
}

fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crosstalk_frame_is_cnot_at_zero() {
        let (m0, m1) = crosstalk_blocks(0.0);
        let id = [1.0, 0.0, 0.0, 1.0];
        let x = [0.0, 1.0, 1.0, 0.0];
        for k in 0..4 {
            assert!((m0[k] - Complex64::new(id[k], 0.0)).norm() < 1e-15);
            assert!((m1[k] - Complex64::new(x[k], 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn crosstalk_blocks_are_unitary() {
        for &alpha in &[-0.03, -0.01, 0.2] {
            let (m0, m1) = crosstalk_blocks(alpha);
            for m in [m0, m1] {
                let md = [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()];
                let p = mul(&m, &md);
                assert!((p[0] - 1.0).norm() < 1e-14 && p[1].norm() < 1e-14);
                assert!(p[2].norm() < 1e-14 && (p[3] - 1.0).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn noiseless_limit_is_exact() {
        let mut c = Circuit::new(3);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::cnot(0, 1)).unwrap();
        c.push(Gate::ry(0.4, 2)).unwrap();
        c.push(Gate::cnot(1, 2)).unwrap();
        let noise = NoiseModel::default();
        let r = run_noisy(&c, &noise, &[0, 1, 2]).unwrap();
        let mut s = QuantumState::zero(3);
        c.apply(&mut s).unwrap();
        assert_eq!(
            r.probabilities,
            s.measure_probabilities(&[0, 1, 2]).unwrap()
        );
        assert_eq!(r.trajectories, 1);
    }

    #[test]
    fn rejects_multi_controlled_gates() {
        let mut c = Circuit::new(3);
        c.push(Gate::toffoli(0, 1, 2)).unwrap();
        let err = run_noisy(&c, &NoiseModel::default(), &[2]).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn validation() {
        let bad = NoiseModel {
            trajectories: 0,
            ..NoiseModel::default()
        };
        assert!(bad.validate().is_err());
        let bad = NoiseModel {
            gamma: -1.0,
            ..NoiseModel::default()
        };
        assert!(bad.validate().is_err());
    }
}
