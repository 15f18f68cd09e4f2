//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qrisk::circuits::{AffineGrid, DiscreteDistribution};
use qrisk::qsim::{Circuit, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<Complex64>>;

/// Outcome distribution of ideal phase estimation for `a = sin^2(theta_a)`:
/// the average of two Fejer kernels centered at `+-theta_a / pi`.
pub fn analytic_qpe(a: f64, m: usize) -> Vec<f64> {
    let big_m = (1usize << m) as f64;
    let theta = a.sqrt().asin() / PI;
    let kernel = |x: f64| {
        let s = (PI * x).sin();
        if s.abs() < 1e-15 {
            1.0
        } else {
            ((big_m * PI * x).sin() / (big_m * s)).powi(2)
        }
    };
    (0..1usize << m)
        .map(|y| {
            let x = y as f64 / big_m;
            0.5 * (kernel(x - theta) + kernel(x + theta))
        })
        .collect()
}

/// Representative `y <= M/2` of the most likely estimate, ties to smaller.
pub fn analytic_modal(a: f64, m: usize) -> u64 {
    let probs = analytic_qpe(a, m);
    let big_m = probs.len();
    let mut pooled = vec![0.0; big_m / 2 + 1];
    for (y, p) in probs.iter().enumerate() {
        pooled[y.min(big_m - y) % (big_m / 2 + 1)] += p;
    }
    let mut best = 0;
    for (i, &w) in pooled.iter().enumerate() {
        if w > pooled[best] + 1e-12 {
            best = i;
        }
    }
    best as u64
}

/// Column `k` is the circuit applied to basis state `k`.
pub fn dense(c: &Circuit) -> Dense {
    (0..1usize << c.num_qubits())
        .map(|k| {
            let mut s = QuantumState::basis(c.num_qubits(), k);
            c.apply(&mut s).unwrap();
            s.into_amplitudes()
        })
        .collect()
}

/// `Ry(theta)` as columns.
pub fn ry_dense(theta: f64) -> Dense {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    vec![
        vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        vec![Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// Largest entry difference after removing the global phase of `b`
/// relative to `a`.
pub fn distance_up_to_phase(a: &Dense, b: &Dense) -> f64 {
    let mut pivot = (0, 0);
    let mut best = 0.0;
    for (i, col) in a.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            if v.norm() > best {
                best = v.norm();
                pivot = (i, j);
            }
        }
    }
    let phase = a[pivot.0][pivot.1] / b[pivot.0][pivot.1];
    let phase = phase / phase.norm();
    a.iter()
        .zip(b)
        .flat_map(|(ca, cb)| ca.iter().zip(cb).map(move |(x, y)| (x - y * phase).norm()))
        .fold(0.0, f64::max)
}

/// Random distribution on `2^n` points with exponential weights.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> DiscreteDistribution {
    let weights: Vec<f64> = (0..1usize << n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    DiscreteDistribution::from_weights(weights, AffineGrid::index()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact `P[X <= l]` by summation.
pub fn cdf(probs: &[f64], l: usize) -> f64 {
    probs[..=l].iter().sum()
}

/// Exact VaR index and CVaR index by a cumulative scan.
pub fn var_cvar(probs: &[f64], alpha: f64) -> (usize, f64) {
    let mut acc = 0.0;
    for (l, p) in probs.iter().enumerate() {
        acc += p;
        if acc >= 1.0 - alpha - 1e-12 {
            let tail: f64 = (0..=l).map(|i| i as f64 * probs[i]).sum();
            return (l, tail / acc);
        }
    }
    unreachable!("probabilities sum to one")
}

type Rho = nalgebra::DMatrix<Complex64>;

fn to_matrix(d: &Dense) -> Rho {
    let n = d.len();
    Rho::from_fn(n, n, |r, c| d[c][r])
}

/// The framed cross-talk CNOT
/// `(S^dagger_c Rx_t(-pi/2)) exp(-i pi Z_c (X_t + alpha Z_t) / 4)` on `n` qubits.
pub fn crosstalk_cnot(n: usize, control: usize, target: usize, alpha: f64) -> Rho {
    let dim = 1usize << n;
    let r = (1.0 + alpha * alpha).sqrt();
    let (s, c) = (PI / 4.0 * r).sin_cos();
    let i = Complex64::i();
    let mut u = Rho::zeros(dim, dim);
    for col in 0..dim {
        let zc = if col >> control & 1 == 0 { 1.0 } else { -1.0 };
        let bt = col >> target & 1;
        let zt = if bt == 0 { 1.0 } else { -1.0 };
        let flipped = col ^ (1 << target);
        // exp(-i zc pi (X + alpha Z) / 4) |bt>
        let stay = c - i * (zc * s * alpha * zt / r);
        let go = -i * (zc * s / r);
        // Rx(-pi/2) = (I + i X) / sqrt(2) on the target.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phase = if zc > 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            -i
        };
        u[(col, col)] += phase * h * (stay + i * go);
        u[(flipped, col)] += phase * h * (go + i * stay);
    }
    u
}

/// Exact final distribution of `measured` when every CNOT is followed by
/// amplitude damping of strength `gamma_c` on every qubit.
pub fn density_matrix_noisy(
    circuit: &Circuit,
    gamma_c: f64,
    alpha: f64,
    measured: &[usize],
) -> Vec<f64> {
    let n = circuit.num_qubits();
    let dim = 1usize << n;
    let mut rho = Rho::zeros(dim, dim);
    rho[(0, 0)] = Complex64::new(1.0, 0.0);
    for g in circuit.gates() {
        let u = if g.is_cnot() {
            crosstalk_cnot(n, g.controls[0], g.targets[0], alpha)
        } else {
            let mut one = Circuit::new(n);
            one.push(g.clone()).unwrap();
            to_matrix(&dense(&one))
        };
        rho = &u * rho * u.adjoint();
        if g.is_cnot() && gamma_c > 0.0 {
            for q in 0..n {
                let mut k0 = Rho::identity(dim, dim);
                let mut k1 = Rho::zeros(dim, dim);
                for b in 0..dim {
                    if b >> q & 1 == 1 {
                        k0[(b, b)] = Complex64::new((1.0 - gamma_c).sqrt(), 0.0);
                        k1[(b ^ (1 << q), b)] = Complex64::new(gamma_c.sqrt(), 0.0);
                    }
                }
                rho = &k0 * &rho * k0.adjoint() + &k1 * &rho * k1.adjoint();
            }
        }
    }
    let mut out = vec![0.0; 1 << measured.len()];
    for b in 0..dim {
        let v = measured
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| acc | ((b >> q & 1) << k));
        out[v] += rho[(b, b)].re;
    }
    out
}
