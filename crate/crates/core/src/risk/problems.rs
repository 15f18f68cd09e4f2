//! Amplitude-estimation problems for each risk measure.

use crate::approx::ApproxParams;
use crate::circuits::{
    comparator, cvar_objective, objective_operator, prepare_distribution,
    square_objective_operator, AEProblem, BinaryPolynomial, DiscreteDistribution,
};
use crate::error::Result;
use crate::qsim::Circuit;

/// `A = F (P_X (x) I)` where `F` acts on the state register plus extra qubits.
fn load_then(dist: &DiscreteDistribution, f_op: Circuit) -> Result<Circuit> {
    let n = dist.num_qubits();
    let mut a = Circuit::new(f_op.num_qubits());
    for r in f_op.registers() {
        a.add_register(&r.name, r.start, r.len)?;
    }
    let mapping: Vec<usize> = (0..n).collect();
    a.append_mapped(&prepare_distribution(dist), &mapping)?;
    a.append(&f_op)?;
    Ok(a)
}

/// Objective qubit probability approximates `c (E[f(X)] - 1/2) + 1/2`.
pub fn expectation_problem(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    params: &ApproxParams,
    m: usize,
) -> Result<AEProblem> {
    let n = dist.num_qubits();
    let a = load_then(dist, objective_operator(f, n, params)?)?;
    AEProblem::new(a, n, m)
}

/// Objective qubit probability is `E[sin^2(c f(X))]`.
pub fn second_moment_problem(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    c: f64,
    m: usize,
) -> Result<AEProblem> {
    let n = dist.num_qubits();
    let a = load_then(dist, square_objective_operator(f, n, c)?)?;
    AEProblem::new(a, n, m)
}

/// Flag qubit probability is `P[X <= l]`.
pub fn cdf_problem(dist: &DiscreteDistribution, l: usize, m: usize) -> Result<AEProblem> {
    let n = dist.num_qubits();
    let a = load_then(dist, comparator(l, n)?)?;
    AEProblem::new(a, n, m)
}

/// Objective qubit probability approximates
/// `c (sum_{i <= l} (i / l) p_i - 1/2) + 1/2`.
pub fn cvar_problem(
    dist: &DiscreteDistribution,
    l: usize,
    params: &ApproxParams,
    m: usize,
) -> Result<AEProblem> {
    let n = dist.num_qubits();
    let a = load_then(dist, cvar_objective(l, n, params)?)?;
    AEProblem::new(a, n, m)
}
