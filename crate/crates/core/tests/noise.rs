//! Trajectory noise simulation against exact density-matrix evolution.

mod common;

use qrisk::finance::tbill_problem;
use qrisk::qsim::{run_noisy, Circuit, Gate, NoiseModel};
use qrisk::risk::noisy_ae_circuit;

fn entangler() -> Circuit {
    let mut c = Circuit::new(3);
    c.extend([
        Gate::h(0),
        Gate::cnot(0, 1),
        Gate::ry(0.7, 2),
        Gate::cnot(1, 2),
        Gate::h(1),
        Gate::cnot(2, 0),
        Gate::ry(-1.1, 0),
        Gate::cnot(0, 2),
    ])
    .unwrap();
    c
}

fn gamma_for(gamma_c: f64, t_cnot: f64) -> f64 {
    -(1.0 - gamma_c).ln() / t_cnot
}

#[test]
fn crosstalk_matches_density_matrix() {
    for alpha in [-0.03, -0.3, 0.5] {
        let c = entangler();
        let noise = NoiseModel {
            alpha,
            ..NoiseModel::default()
        };
        let got = run_noisy(&c, &noise, &[0, 1, 2]).unwrap();
        let want = common::density_matrix_noisy(&c, 0.0, alpha, &[0, 1, 2]);
        assert_eq!(got.trajectories, 1);
        for (g, w) in got.probabilities.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "alpha {alpha}: {g} vs {w}");
        }
    }
}

fn check_damping(circuit: &Circuit, measured: &[usize], gamma_c: f64, alpha: f64) {
    let noise = NoiseModel {
        gamma: gamma_for(gamma_c, 100.0),
        alpha,
        trajectories: 4000,
        seed: 21,
        ..NoiseModel::default()
    };
    let got = run_noisy(circuit, &noise, measured).unwrap();
    let want = common::density_matrix_noisy(circuit, gamma_c, alpha, measured);
    for ((g, se), w) in got
        .probabilities
        .iter()
        .zip(&got.standard_errors)
        .zip(&want)
    {
        assert!(
            (g - w).abs() <= 5.0 * se.max(1e-3),
            "gamma_c {gamma_c} alpha {alpha}: {g} +- {se} vs exact {w}"
        );
    }
}

#[test]
fn damping_matches_density_matrix() {
    check_damping(&entangler(), &[0, 1, 2], 0.05, 0.0);
    check_damping(&entangler(), &[1, 2], 0.2, -0.1);
}

#[test]
fn noisy_ae_circuit_matches_density_matrix() {
    let problem = tbill_problem(0.3, 2).unwrap();
    let circuit = noisy_ae_circuit(&problem).unwrap();
    assert!(circuit.num_qubits() <= 6);
    for gamma_c in [0.01, 0.1, 0.4] {
        check_damping(&circuit, &[1, 2], gamma_c, -0.02);
    }
}

#[test]
fn standard_error_halves_with_four_times_the_trajectories() {
    let c = entangler();
    let base = NoiseModel {
        gamma: gamma_for(0.1, 100.0),
        seed: 5,
        ..NoiseModel::default()
    };
    let se = |t: usize| {
        let r = run_noisy(
            &c,
            &NoiseModel {
                trajectories: t,
                ..base
            },
            &[0],
        )
        .unwrap();
        r.standard_errors[0]
    };
    let ratio = se(1000) / se(4000);
    assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
}
