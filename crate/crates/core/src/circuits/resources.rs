//! Expansion to single-qubit gates and CNOTs, and CNOT accounting.
//!
//! Decomposition rules (`k` = number of controls):
//!
//! | gate                         | expansion                                         | CNOTs            |
//! |------------------------------|---------------------------------------------------|------------------|
//! | X, k = 1                     | CNOT                                              | 1                |
//! | Z, k = 1                     | H, CNOT, H                                        | 1                |
//! | Ry(t), k = 1                 | Ry(t/2), CNOT, Ry(-t/2), CNOT                     | 2                |
//! | phase(l), k = 1              | P(l/2) on c, CNOT, P(-l/2), CNOT, P(l/2) on t     | 2                |
//! | X, k = 2 (Toffoli)           | standard H/T/CNOT network                         | 6                |
//! | X, k >= 3                    | V-chain of `2k - 3` Toffolis, `k - 2` ancillas     | 6(2k - 3)        |
//! | Z, k >= 2                    | H, multi-controlled X, H                          | as X             |
//! | Ry or phase, k >= 2          | AND of controls into `k - 1` ancillas (`k - 1` Toffolis), controlled gate, uncompute | 12(k - 1) + 2 |
//! | SWAP                         | three CNOTs                                       | 3                |
//! | SWAP, k >= 1                 | CNOT, X with `k + 1` controls, CNOT               | 2 + cost of X    |
//!
//! Ancillas come from one pool appended after the circuit's qubits and are
//! returned to `|0>` after every gate.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate, GateKind};

/// CNOT totals after decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResourceReport {
    /// Gate count per kind (`RY+2` is a doubly-controlled Y rotation).
    pub gates: BTreeMap<String, usize>,
    /// CNOTs contributed by each gate kind.
    pub cnots_by_kind: BTreeMap<String, usize>,
    pub cnot_total: usize,
    /// Ancillas needed by the decomposition.
    pub ancillas: usize,
}

fn is_phase(kind: &GateKind) -> bool {
    matches!(kind, GateKind::U3 { theta, .. } if *theta == 0.0)
}

fn mcx_cnots(k: usize) -> usize {
    match k {
        0 => 0,
        1 => 1,
        _ => 6 * (2 * k - 3),
    }
}

fn mcx_ancillas(k: usize) -> usize {
    k.saturating_sub(2)
}

/// CNOTs and ancillas for one gate.
fn gate_cost(g: &Gate) -> Result<(usize, usize)> {
    let k = g.controls.len();
    let cost = match &g.kind {
        _ if k == 0 && g.targets.len() == 1 => (0, 0),
        GateKind::Swap if k == 0 => (3, 0),
        GateKind::Swap => (2 + mcx_cnots(k + 1), mcx_ancillas(k + 1)),
        GateKind::X | GateKind::Z => (mcx_cnots(k), mcx_ancillas(k)),
        GateKind::Ry(_) => rotation_cost(k),
        kind if is_phase(kind) => rotation_cost(k),
        _ => {
            return Err(Error::Unsupported(format!(
                "no CNOT decomposition for {}",
                g
            )))
        }
    };
    Ok(cost)
}

fn rotation_cost(k: usize) -> (usize, usize) {
    if k == 1 {
        (2, 0)
    } else {
        (12 * (k - 1) + 2, k - 1)
    }
}

/// Count CNOTs under the pinned decomposition without building it.
pub fn cnot_count(circuit: &Circuit) -> Result<ResourceReport> {
    let mut report = ResourceReport::default();
    for g in circuit.gates() {
        let (cnots, ancillas) = gate_cost(g)?;
        let key = if g.controls.is_empty() {
            g.kind.name().to_string()
        } else {
            format!("{}+{}", g.kind.name(), g.controls.len())
        };
        *report.gates.entry(key.clone()).or_insert(0) += 1;
        if cnots > 0 {
            *report.cnots_by_kind.entry(key).or_insert(0) += cnots;
        }
        report.cnot_total += cnots;
        report.ancillas = report.ancillas.max(ancillas);
    }
    Ok(report)
}

/// Rewrite `circuit` into uncontrolled single-qubit gates and CNOTs,
/// appending the ancilla pool as register `ancilla`.
pub fn decompose(circuit: &Circuit) -> Result<Circuit> {
    let ancillas = cnot_count(circuit)?.ancillas;
    let n = circuit.num_qubits();
    let mut out = Circuit::new(n + ancillas);
    for r in circuit.registers() {
        out.add_register(&r.name, r.start, r.len)?;
    }
    if ancillas > 0 {
        out.add_register("ancilla", n, ancillas)?;
    }
    let pool: Vec<usize> = (n..n + ancillas).collect();
    let mut gates = Vec::new();
    for g in circuit.gates() {
        expand(g, &pool, &mut gates)?;
    }
    out.extend(gates)?;
    Ok(out)
}

fn expand(g: &Gate, pool: &[usize], out: &mut Vec<Gate>) -> Result<()> {
    let k = g.controls.len();
    if k == 0 {
        if let GateKind::Swap = g.kind {
            let (a, b) = (g.targets[0], g.targets[1]);
            out.extend([Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)]);
        } else {
            out.push(g.clone());
        }
        return Ok(());
    }
    let t = g.targets[0];
    match &g.kind {
        GateKind::X => mcx(&g.controls, t, pool, out),
        GateKind::Z => {
            out.push(Gate::h(t));
            mcx(&g.controls, t, pool, out);
            out.push(Gate::h(t));
        }
        GateKind::Swap => {
            let (a, b) = (g.targets[0], g.targets[1]);
            let mut controls = g.controls.clone();
            controls.push(a);
            out.push(Gate::cnot(b, a));
            mcx(&controls, b, pool, out);
            out.push(Gate::cnot(b, a));
        }
        GateKind::Ry(theta) => {
            let theta = *theta;
            with_and(&g.controls, pool, out, |c, out| {
                out.extend([
                    Gate::ry(theta / 2.0, t),
                    Gate::cnot(c, t),
                    Gate::ry(-theta / 2.0, t),
                    Gate::cnot(c, t),
                ]);
            });
        }
        GateKind::U3 { phi, lambda, .. } if is_phase(&g.kind) => {
            let lam = phi + lambda;
            with_and(&g.controls, pool, out, |c, out| {
                out.extend([
                    Gate::phase(lam / 2.0, c),
                    Gate::cnot(c, t),
                    Gate::phase(-lam / 2.0, t),
                    Gate::cnot(c, t),
                    Gate::phase(lam / 2.0, t),
                ]);
            });
        }
        _ => {
            return Err(Error::Unsupported(format!("no CNOT decomposition for {g}")));
        }
    }
    Ok(())
}

/// Compute the AND of `controls` into one qubit, emit `body` controlled on
/// it, then uncompute.
fn with_and(
    controls: &[usize],
    pool: &[usize],
    out: &mut Vec<Gate>,
    body: impl FnOnce(usize, &mut Vec<Gate>),
) {
    if controls.len() == 1 {
        body(controls[0], out);
        return;
    }
    let mut chain = Vec::new();
    chain.push((controls[0], controls[1], pool[0]));
    for (i, &c) in controls.iter().enumerate().skip(2) {
        chain.push((c, pool[i - 2], pool[i - 1]));
    }
    for &(a, b, t) in &chain {
        toffoli(a, b, t, out);
    }
    body(pool[controls.len() - 2], out);
    for &(a, b, t) in chain.iter().rev() {
        toffoli(a, b, t, out);
    }
}

fn mcx(controls: &[usize], target: usize, pool: &[usize], out: &mut Vec<Gate>) {
    match controls.len() {
        1 => out.push(Gate::cnot(controls[0], target)),
        2 => toffoli(controls[0], controls[1], target, out),
        k => {
            let mut chain = Vec::new();
            chain.push((controls[0], controls[1], pool[0]));
            for i in 2..k - 1 {
                chain.push((controls[i], pool[i - 2], pool[i - 1]));
            }
            for &(a, b, t) in &chain {
                toffoli(a, b, t, out);
            }
            toffoli(controls[k - 1], pool[k - 3], target, out);
            for &(a, b, t) in chain.iter().rev() {
                toffoli(a, b, t, out);
            }
        }
    }
}

/// Six-CNOT Toffoli with `T = U3(0, 0, pi/4)`.
fn toffoli(a: usize, b: usize, t: usize, out: &mut Vec<Gate>) {
    let tg = |q| Gate::phase(FRAC_PI_4, q);
    let tdg = |q| Gate::phase(-FRAC_PI_4, q);
    out.extend([
        Gate::h(t),
        Gate::cnot(b, t),
        tdg(t),
        Gate::cnot(a, t),
        tg(t),
        Gate::cnot(b, t),
        tdg(t),
        Gate::cnot(a, t),
        tg(b),
        tg(t),
        Gate::h(t),
        Gate::cnot(a, b),
        tg(a),
        tdg(b),
        Gate::cnot(a, b),
    ]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::QuantumState;

    fn assert_equivalent(original: &Circuit) {
        let d = decompose(original).unwrap();
        assert!(d
            .gates()
            .iter()
            .all(|g| g.controls.is_empty() || g.is_cnot()));
        let n = original.num_qubits();
        let report = cnot_count(original).unwrap();
        let counted = d.gates().iter().filter(|g| g.is_cnot()).count();
        assert_eq!(report.cnot_total, counted);
        for input in 0..1usize << n {
            let mut a = QuantumState::basis(n, input);
            original.apply(&mut a).unwrap();
            let mut b = QuantumState::basis(d.num_qubits(), input);
            d.apply(&mut b).unwrap();
            for (i, amp) in b.amplitudes().iter().enumerate() {
                let expected = if i < 1 << n {
                    a.amplitudes()[i]
                } else {
                    0.0.into()
                };
                assert!((amp - expected).norm() < 1e-12, "input {input} index {i}");
            }
        }
    }

    #[test]
    fn expansions_are_exact() {
        let gates = [
            Gate::cnot(0, 1),
            Gate::toffoli(2, 0, 1),
            Gate::new(GateKind::X, vec![0], vec![1, 2, 3]),
            Gate::new(GateKind::X, vec![4], vec![0, 1, 2, 3]),
            Gate::new(GateKind::Z, vec![0], vec![3]),
            Gate::new(GateKind::Z, vec![2], vec![0, 1, 3, 4]),
            Gate::mcry(0.7, vec![1], 0),
            Gate::mcry(-1.3, vec![0, 2], 1),
            Gate::mcry(0.4, vec![0, 1, 3, 4], 2),
            Gate::phase(0.9, 1).with_control(0),
            Gate::phase(0.9, 1).with_control(0).with_control(4),
            Gate::swap(0, 3),
            Gate::swap(1, 3).with_control(2),
        ];
        for g in gates {
            // Prepare a nontrivial superposition first so phases matter.
            let mut c = Circuit::new(5);
            for q in 0..5 {
                c.push(Gate::ry(0.3 + 0.2 * q as f64, q)).unwrap();
            }
            c.push(g).unwrap();
            assert_equivalent(&c);
        }
    }

    #[test]
    fn pinned_counts() {
        let mut c = Circuit::new(3);
        c.push(Gate::mcry(0.5, vec![0, 1], 2)).unwrap();
        assert_eq!(cnot_count(&c).unwrap().cnot_total, 14);
        let mut c = Circuit::new(2);
        for _ in 0..5 {
            c.push(Gate::cnot(0, 1)).unwrap();
        }
        assert_eq!(cnot_count(&c).unwrap().cnot_total, 5);
    }

    #[test]
    fn unsupported_kinds() {
        let mut c = Circuit::new(2);
        c.push(Gate::new(GateKind::H, vec![0], vec![1])).unwrap();
        assert!(matches!(cnot_count(&c), Err(Error::Unsupported(_))));
    }
}
