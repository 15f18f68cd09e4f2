//! Polynomial rotations of the objective qubit.

use std::f64::consts::FRAC_PI_4;

use super::comparator::comparator;
use super::polynomial::{BinaryPolynomial, PolynomialSpec};
use crate::approx::{taylor_polynomial, ApproxParams};
use crate::error::{structural, validation, Result};
use crate::qsim::{Circuit, Gate};

/// Gates rotating `target` by `Ry(angle(q))`, one multi-controlled rotation
/// per monomial of `angle`. Bit `k` of the polynomial is qubit `qubits[k]`;
/// every rotation is additionally controlled by `extra_controls`.
pub fn binary_rotation_gates(
    angle: &BinaryPolynomial,
    qubits: &[usize],
    target: usize,
    extra_controls: &[usize],
) -> Vec<Gate> {
    angle
        .terms()
        .iter()
        .map(|(&mask, &theta)| {
            let mut controls: Vec<usize> = (0..qubits.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| qubits[k])
                .collect();
            controls.extend_from_slice(extra_controls);
            Gate::mcry(theta, controls, target)
        })
        .collect()
}

/// Map `|x>|0>` to `|x>(cos(p(x)/2)|0> + sin(p(x)/2)|1>)` for `x` on qubits
/// `0..n`, expanding `p` over the bits of `x`.
pub fn polynomial_rotation(poly: &PolynomialSpec, n: usize, target: usize) -> Result<Circuit> {
    if n == 0 {
        return validation("polynomial rotation needs at least one input qubit");
    }
    if target < n {
        return structural(format!("target {target} lies inside the input register"));
    }
    let mut circuit = Circuit::new(target + 1);
    circuit.add_register("state", 0, n)?;
    circuit.add_register("objective", target, 1)?;
    let angle = BinaryPolynomial::from_index_polynomial(poly, n);
    let qubits: Vec<usize> = (0..n).collect();
    circuit.extend(binary_rotation_gates(&angle, &qubits, target, &[]))?;
    Ok(circuit)
}

/// The rotation angle `2 (c p_u(f) + pi/4)` as a polynomial over the input bits.
pub fn objective_angle(f: &BinaryPolynomial, params: &ApproxParams) -> BinaryPolynomial {
    let p = taylor_polynomial(params);
    let scaled = p
        .scale(2.0 * params.c)
        .add(&PolynomialSpec::constant(2.0 * FRAC_PI_4));
    f.substitute_into(&scaled)
}

fn check_objective_range(f: &BinaryPolynomial, n: usize) -> Result<()> {
    if f.num_bits() > n {
        return structural(format!(
            "objective uses bit {} beyond {n} inputs",
            f.num_bits() - 1
        ));
    }
    let (lo, hi) = f.range(n);
    if lo < -1e-12 || hi > 1.0 + 1e-12 {
        return validation(format!("objective range [{lo}, {hi}] is not inside [0, 1]"));
    }
    Ok(())
}

/// Operator `F` on `n + 1` qubits: the objective qubit `n` ends in `|1>` with
/// probability `sin^2(c p_u(f(x)) + pi/4)`, approximately `c (f(x) - 1/2) + 1/2`.
pub fn objective_operator(
    f: &BinaryPolynomial,
    n: usize,
    params: &ApproxParams,
) -> Result<Circuit> {
    params.validate()?;
    check_objective_range(f, n)?;
    let mut circuit = Circuit::new(n + 1);
    circuit.add_register("state", 0, n)?;
    circuit.add_register("objective", n, 1)?;
    let qubits: Vec<usize> = (0..n).collect();
    let angle = objective_angle(f, params);
    circuit.extend(binary_rotation_gates(&angle, &qubits, n, &[]))?;
    Ok(circuit)
}

/// Objective for second moments: rotation angle `2 c f(x)`, so the `|1>`
/// probability is `sin^2(c f(x))`, approximately `c^2 f(x)^2`.
pub fn square_objective_operator(f: &BinaryPolynomial, n: usize, c: f64) -> Result<Circuit> {
    ApproxParams::new(c, 0).validate()?;
    check_objective_range(f, n)?;
    let mut circuit = Circuit::new(n + 1);
    circuit.add_register("state", 0, n)?;
    circuit.add_register("objective", n, 1)?;
    let qubits: Vec<usize> = (0..n).collect();
    circuit.extend(binary_rotation_gates(&f.scale(2.0 * c), &qubits, n, &[]))?;
    Ok(circuit)
}

/// Objective for CVaR on `2n + 2` qubits: state `[0, n)`, objective `n`,
/// comparator flag `n + 1`, carries `[n + 2, 2n + 2)`.
///
/// The flag marks `x <= l`; with it the objective encodes `f(x) = x / l`,
/// without it `f = 0`. The `|1>` probability therefore approximates
/// `c (sum_{i <= l} (i / l) p_i - 1/2) + 1/2`.
pub fn cvar_objective(l: usize, n: usize, params: &ApproxParams) -> Result<Circuit> {
    params.validate()?;
    if l == 0 {
        return validation("CVaR objective needs l >= 1; l = 0 is handled without a circuit");
    }
    if n == 0 || l >= 1 << n {
        return validation(format!("level {l} out of range for {n} qubits"));
    }
    let (objective, flag) = (n, n + 1);
    let mut circuit = Circuit::new(2 * n + 2);
    circuit.add_register("state", 0, n)?;
    circuit.add_register("objective", objective, 1)?;
    circuit.add_register("flag", flag, 1)?;
    circuit.add_register("carry", n + 2, n)?;
    let mut mapping: Vec<usize> = (0..n).collect();
    mapping.push(flag);
    mapping.extend(n + 2..2 * n + 2);
    circuit.append_mapped(&comparator(l, n)?, &mapping)?;

    let p = taylor_polynomial(params);
    let base = 2.0 * (params.c * p.eval(0.0) + FRAC_PI_4);
    circuit.push(Gate::ry(base, objective))?;
    let weights: Vec<f64> = (0..n).map(|k| (1u64 << k) as f64 / l as f64).collect();
    let f = BinaryPolynomial::linear(&weights, 0.0);
    let delta = f
        .substitute_into(&p.scale(2.0 * params.c))
        .add(&BinaryPolynomial::constant(-2.0 * params.c * p.eval(0.0)));
    let qubits: Vec<usize> = (0..n).collect();
    circuit.extend(binary_rotation_gates(&delta, &qubits, objective, &[flag]))?;
    Ok(circuit)
}
