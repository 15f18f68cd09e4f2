//! Circuits, registers and the text serialization.

use std::fmt;
use std::sync::Arc;

use super::gate::{Gate, GateKind};
use super::state::{QuantumState, MAX_QUBITS};
use crate::error::{structural, Error, Result};

/// A named, contiguous range of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn qubits(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }
}

/// An ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    registers: Vec<Register>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            registers: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Declare a register; ranges must lie inside the circuit and not overlap.
    pub fn add_register(&mut self, name: &str, start: usize, len: usize) -> Result<()> {
        if start + len > self.num_qubits {
            return structural(format!(
                "register {name} [{start}, {}) exceeds {} qubits",
                start + len,
                self.num_qubits
            ));
        }
        if self.register(name).is_some() {
            return structural(format!("register {name} declared twice"));
        }
        if let Some(r) = self
            .registers
            .iter()
            .find(|r| start < r.start + r.len && r.start < start + len)
        {
            return structural(format!("register {name} overlaps {}", r.name));
        }
        self.registers.push(Register {
            name: name.to_string(),
            start,
            len,
        });
        Ok(())
    }

    /// Grow the qubit count, keeping gates and registers.
    pub fn widen(&mut self, num_qubits: usize) {
        assert!(num_qubits >= self.num_qubits);
        self.num_qubits = num_qubits;
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Append `other`, relabelling its qubit `q` as `mapping[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, mapping: &[usize]) -> Result<()> {
        if mapping.len() != other.num_qubits {
            return structural(format!(
                "mapping has {} entries for a {}-qubit circuit",
                mapping.len(),
                other.num_qubits
            ));
        }
        for g in &other.gates {
            let mapped = Gate::new(
                g.kind.clone(),
                g.targets.iter().map(|&q| mapping[q]).collect(),
                g.controls.iter().map(|&q| mapping[q]).collect(),
            );
            self.push(mapped)?;
        }
        Ok(())
    }

    /// Append `other` on the same qubit labels.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return structural("appended circuit is wider than the target");
        }
        let mapping: Vec<usize> = (0..other.num_qubits).collect();
        self.append_mapped(other, &mapping)
    }

    /// The adjoint circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            registers: self.registers.clone(),
        }
    }

    /// Apply every gate to `state`.
    pub fn apply(&self, state: &mut QuantumState) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return structural(format!(
                "circuit has {} qubits, state has {}",
                self.num_qubits,
                state.num_qubits()
            ));
        }
        for g in &self.gates {
            state.apply_gate_unchecked(g);
        }
        Ok(())
    }

    /// Count of gates per kind name, with the number of controls appended
    /// (for example `RY+2` for a doubly-controlled Y rotation).
    pub fn gate_histogram(&self) -> std::collections::BTreeMap<String, usize> {
        let mut h = std::collections::BTreeMap::new();
        for g in &self.gates {
            let key = if g.controls.is_empty() {
                g.kind.name().to_string()
            } else {
                format!("{}+{}", g.kind.name(), g.controls.len())
            };
            *h.entry(key).or_insert(0) += 1;
        }
        h
    }

    /// Serialize to the line-oriented text format; see [`Circuit::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parse the text format:
    ///
    /// ```text
    /// qubits <N>
    /// register <name> <start> <len>
    /// <KIND> <targets...> ; <controls...> ; <params...>
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored. KIND is one of
    /// `H X Z RY U2 U3 SWAP PERM`; for `PERM` the parameters are the truth
    /// table.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx as u64 + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            match head {
                "qubits" => {
                    if circuit.is_some() {
                        return Err(perr("duplicate qubits line".into()));
                    }
                    let n: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| perr("expected qubit count".into()))?;
                    if n > MAX_QUBITS {
                        return Err(perr(format!("{n} qubits exceeds the simulator limit")));
                    }
                    circuit = Some(Circuit::new(n));
                }
                "register" => {
                    let c = circuit
                        .as_mut()
                        .ok_or_else(|| perr("register before qubits line".into()))?;
                    let name = words
                        .next()
                        .ok_or_else(|| perr("expected register name".into()))?;
                    let nums: Vec<usize> = words
                        .map(|w| w.parse().map_err(|_| perr(format!("bad integer {w}"))))
                        .collect::<Result<_>>()?;
                    if nums.len() != 2 {
                        return Err(perr("register needs start and length".into()));
                    }
                    c.add_register(name, nums[0], nums[1])
                        .map_err(|e| perr(e.to_string()))?;
                }
                _ => {
                    let c = circuit
                        .as_mut()
                        .ok_or_else(|| perr("gate before qubits line".into()))?;
                    let gate = parse_gate(line).map_err(perr)?;
                    c.push(gate).map_err(|e| perr(e.to_string()))?;
                }
            }
        }
        Ok(circuit.unwrap_or_default())
    }
}

fn parse_gate(line: &str) -> std::result::Result<Gate, String> {
    let fields: Vec<&str> = line.split(';').collect();
    if fields.len() != 3 {
        return Err("expected `KIND targets ; controls ; params`".into());
    }
    let mut head = fields[0].split_whitespace();
    let kind_name = head.next().ok_or("missing gate kind")?;
    let ints = |words: &mut dyn Iterator<Item = &str>| -> std::result::Result<Vec<usize>, String> {
        words
            .map(|w| w.parse().map_err(|_| format!("bad qubit index {w}")))
            .collect()
    };
    let targets = ints(&mut head)?;
    let controls = ints(&mut fields[1].split_whitespace())?;
    let param_words: Vec<&str> = fields[2].split_whitespace().collect();
    let floats = || -> std::result::Result<Vec<f64>, String> {
        param_words
            .iter()
            .map(|w| w.parse().map_err(|_| format!("bad parameter {w}")))
            .collect()
    };
    let want = |k: usize, p: Vec<f64>| -> std::result::Result<Vec<f64>, String> {
        if p.len() == k {
            Ok(p)
        } else {
            Err(format!(
                "{kind_name} expects {k} parameter(s), got {}",
                p.len()
            ))
        }
    };
    let kind = match kind_name {
        "H" => {
            want(0, floats()?)?;
            GateKind::H
        }
        "X" => {
            want(0, floats()?)?;
            GateKind::X
        }
        "Z" => {
            want(0, floats()?)?;
            GateKind::Z
        }
        "SWAP" => {
            want(0, floats()?)?;
            GateKind::Swap
        }
        "RY" => GateKind::Ry(want(1, floats()?)?[0]),
        "U2" => {
            let p = want(2, floats()?)?;
            GateKind::U2 {
                phi: p[0],
                lambda: p[1],
            }
        }
        "U3" => {
            let p = want(3, floats()?)?;
            GateKind::U3 {
                theta: p[0],
                phi: p[1],
                lambda: p[2],
            }
        }
        "PERM" => {
            let table: Vec<usize> = param_words
                .iter()
                .map(|w| w.parse().map_err(|_| format!("bad table entry {w}")))
                .collect::<std::result::Result<_, String>>()?;
            GateKind::Permutation(Arc::new(table))
        }
        other => return Err(format!("unknown gate kind {other}")),
    };
    Ok(Gate::new(kind, targets, controls))
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_qubits)?;
        for r in &self.registers {
            writeln!(f, "register {} {} {}", r.name, r.start, r.len)?;
        }
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Apply `circuit` to a copy of `state`.
pub fn apply_circuit(state: &QuantumState, circuit: &Circuit) -> Result<QuantumState> {
    let mut out = state.clone();
    circuit.apply(&mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new(3);
        c.add_register("state", 0, 2).unwrap();
        c.add_register("objective", 2, 1).unwrap();
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::mcry(0.1234567890123, vec![0, 1], 2)).unwrap();
        c.push(Gate::new(
            GateKind::U3 {
                theta: 0.5,
                phi: -1.0 / 3.0,
                lambda: 2.0,
            },
            vec![1],
            vec![],
        ))
        .unwrap();
        c.push(Gate::new(
            GateKind::U2 {
                phi: 0.1,
                lambda: 0.2,
            },
            vec![0],
            vec![2],
        ))
        .unwrap();
        c.push(Gate::swap(0, 2)).unwrap();
        c.push(Gate::permutation(vec![3, 2, 1, 0], vec![0, 1]))
            .unwrap();
        c
    }

    #[test]
    fn text_round_trip() {
        let c = sample_circuit();
        let text = c.to_text();
        assert_eq!(Circuit::parse(&text).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Circuit::parse("qubits 2\nH 0 ; ;\nFOO 1 ; ;\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Circuit::parse("qubits 2\nX 5 ; ;\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn registers_must_be_disjoint() {
        let mut c = Circuit::new(4);
        c.add_register("a", 0, 2).unwrap();
        assert!(c.add_register("b", 1, 2).is_err());
        assert!(c.add_register("c", 3, 2).is_err());
        assert!(c.add_register("d", 2, 2).is_ok());
    }

    #[test]
    fn inverse_undoes_circuit() {
        let c = sample_circuit();
        let mut s = QuantumState::basis(3, 5);
        c.apply(&mut s).unwrap();
        c.inverse().apply(&mut s).unwrap();
        assert!((s.amplitudes()[5].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = QuantumState::basis(2, 3);
        assert_eq!(apply_circuit(&s, &Circuit::new(2)).unwrap(), s);
        assert!(apply_circuit(&s, &Circuit::new(3)).is_err());
    }
}
