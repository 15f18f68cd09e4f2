//! Grover operator, QFT and the amplitude-estimation circuit.

use std::f64::consts::PI;

use crate::error::{structural, validation, Result};
use crate::qsim::{Circuit, Gate, GateKind};

/// How controlled powers `Q^(2^j)` are realized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerRule {
    /// `2^j` sequential controlled-`Q` applications.
    Repeat,
    /// `A = Ry(theta)` on a single qubit, so `Q^k = Ry(2 k theta)`.
    SingleQubitRy(f64),
}

/// An operator `A` whose objective-qubit `|1>` probability is estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct AEProblem {
    pub a_circuit: Circuit,
    pub objective_qubit: usize,
    /// Number of evaluation qubits.
    pub m: usize,
    pub powers: PowerRule,
}

impl AEProblem {
    pub fn new(a_circuit: Circuit, objective_qubit: usize, m: usize) -> Result<AEProblem> {
        let problem = AEProblem {
            a_circuit,
            objective_qubit,
            m,
            powers: PowerRule::Repeat,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// The single-qubit problem `A = Ry(theta)` with its closed-form powers.
    pub fn single_qubit(theta: f64, m: usize) -> Result<AEProblem> {
        let mut a = Circuit::new(1);
        a.add_register("objective", 0, 1)?;
        a.push(Gate::ry(theta, 0))?;
        let problem = AEProblem {
            a_circuit: a,
            objective_qubit: 0,
            m,
            powers: PowerRule::SingleQubitRy(theta),
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return validation("amplitude estimation needs m >= 1");
        }
        if self.m > 16 {
            return validation(format!("m = {} evaluation qubits is too many", self.m));
        }
        if self.objective_qubit >= self.a_circuit.num_qubits() {
            return structural("objective qubit outside the operator's register");
        }
        Ok(())
    }

    /// `M = 2^m`.
    pub fn samples(&self) -> u64 {
        1 << self.m
    }

    pub fn width(&self) -> usize {
        self.a_circuit.num_qubits()
    }
}

/// Gates of `Q = A S_0 A^dagger S_chi` (applied right to left), optionally
/// controlled. `S_chi = X Z X` on the objective flips the sign of its `|0>`
/// component, and `S_0 = I - 2|0><0|` is an X-conjugated multi-controlled Z
/// over every qubit of `A`. Only the reflections carry the control.
fn grover_gates(problem: &AEProblem, control: Option<usize>) -> Vec<Gate> {
    let w = problem.width();
    let obj = problem.objective_qubit;
    let ctl: Vec<usize> = control.into_iter().collect();
    let mut gates = Vec::new();
    gates.push(Gate::x(obj));
    gates.push(Gate::new(GateKind::Z, vec![obj], ctl.clone()));
    gates.push(Gate::x(obj));
    gates.extend(problem.a_circuit.inverse().gates().iter().cloned());
    gates.extend((0..w).map(Gate::x));
    let mut controls: Vec<usize> = (1..w).collect();
    controls.extend(&ctl);
    gates.push(Gate::new(GateKind::Z, vec![0], controls));
    gates.extend((0..w).map(Gate::x));
    gates.extend(problem.a_circuit.gates().iter().cloned());
    gates
}

/// The Grover operator `Q` on the qubits of `A`.
pub fn grover_operator(problem: &AEProblem) -> Result<Circuit> {
    problem.validate()?;
    let mut q = Circuit::new(problem.width());
    q.extend(grover_gates(problem, None))?;
    Ok(q)
}

/// Controlled `Q^power` with evaluation qubit `control`.
fn controlled_power(problem: &AEProblem, control: usize, power: u64) -> Vec<Gate> {
    match problem.powers {
        PowerRule::SingleQubitRy(theta) => {
            vec![Gate::mcry(2.0 * power as f64 * theta, vec![control], 0)]
        }
        PowerRule::Repeat => {
            let one = grover_gates(problem, Some(control));
            let mut gates = Vec::with_capacity(one.len() * power as usize);
            for _ in 0..power {
                gates.extend(one.iter().cloned());
            }
            gates
        }
    }
}

/// Hadamards on the evaluation register, controlled `Q^(2^j)` from
/// evaluation qubit `j`, then the inverse QFT. `A` keeps its qubit labels;
/// the evaluation register follows at `[width, width + m)`.
pub fn amplitude_estimation_circuit(problem: &AEProblem) -> Result<Circuit> {
    problem.validate()?;
    let w = problem.width();
    let m = problem.m;
    let mut circuit = Circuit::new(w + m);
    for r in problem.a_circuit.registers() {
        circuit.add_register(&r.name, r.start, r.len)?;
    }
    circuit.add_register("evaluation", w, m)?;
    circuit.append(&problem.a_circuit)?;
    circuit.extend((w..w + m).map(Gate::h))?;
    for j in 0..m {
        circuit.extend(controlled_power(problem, w + j, 1 << j))?;
    }
    let eval: Vec<usize> = (w..w + m).collect();
    circuit.append_mapped(&inverse_qft(m)?, &eval)?;
    Ok(circuit)
}

/// Controlled phase `diag(1, 1, 1, e^{i lambda})`.
fn cphase(lambda: f64, control: usize, target: usize) -> Gate {
    Gate::phase(lambda, target).with_control(control)
}

/// QFT on `m` qubits with matrix entries `exp(2 pi i j k / 2^m) / 2^(m/2)`,
/// including the final bit-reversal swaps.
pub fn qft(m: usize) -> Result<Circuit> {
    if m == 0 {
        return validation("QFT needs at least one qubit");
    }
    let mut c = Circuit::new(m);
    for j in (0..m).rev() {
        c.push(Gate::h(j))?;
        for k in (0..j).rev() {
            c.push(cphase(PI / (1u64 << (j - k)) as f64, k, j))?;
        }
    }
    for k in 0..m / 2 {
        c.push(Gate::swap(k, m - 1 - k))?;
    }
    Ok(c)
}

/// Inverse QFT: entries `exp(-2 pi i j k / 2^m) / 2^(m/2)`.
pub fn inverse_qft(m: usize) -> Result<Circuit> {
    Ok(qft(m)?.inverse())
}
