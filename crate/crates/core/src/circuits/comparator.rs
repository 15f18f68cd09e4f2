//! Reversible comparator `|x>|0> -> |x>|[x <= l]>`.
//!
//! With `t = 2^n - (l + 1)`, the sum `x + t` overflows exactly when `x > l`,
//! so the flag is the complement of the final carry of `x + t`. The addend
//! `t` is classical, so each carry is either an AND (bit of `t` is 0) or an
//! OR (bit of `t` is 1) of the input bit and the previous carry:
//!
//! ```text
//! c_1     = x_0 AND t_0
//! c_{i+1} = x_i AND c_i     if t_i = 0
//! c_{i+1} = x_i OR  c_i     if t_i = 1   (X-conjugated Toffoli, then X)
//! flag    = NOT c_n
//! ```
//!
//! Carries `c_1..c_n` live in `n` ancillas that are uncomputed in reverse.

use std::sync::Arc;

use crate::error::{validation, Result};
use crate::qsim::{Circuit, Gate, GateKind};

/// Gate-level comparator on `2n + 1` qubits: input `[0, n)`, flag `n`,
/// carries `[n + 1, 2n + 1)`.
pub fn comparator(l: usize, n: usize) -> Result<Circuit> {
    check_level(l, n)?;
    let flag = n;
    let carry = |i: usize| n + i; // carry c_i for i in 1..=n
    let t = (1usize << n) - (l + 1);
    let mut compute = Vec::new();
    if t & 1 == 1 {
        compute.push(Gate::cnot(0, carry(1)));
    }
    for i in 1..n {
        let (x, c, out) = (i, carry(i), carry(i + 1));
        if t >> i & 1 == 0 {
            compute.push(Gate::toffoli(x, c, out));
        } else {
            compute.extend([
                Gate::x(x),
                Gate::x(c),
                Gate::toffoli(x, c, out),
                Gate::x(x),
                Gate::x(c),
                Gate::x(out),
            ]);
        }
    }
    let mut circuit = layout(n)?;
    circuit.extend(compute.iter().cloned())?;
    circuit.push(Gate::cnot(carry(n), flag))?;
    circuit.push(Gate::x(flag))?;
    circuit.extend(compute.iter().rev().map(Gate::inverse))?;
    Ok(circuit)
}

/// The same map as a single truth-table gate on `[0, n]`; the carry qubits
/// are present but unused.
pub fn comparator_oracle(l: usize, n: usize) -> Result<Circuit> {
    check_level(l, n)?;
    let size = 1usize << (n + 1);
    let table: Vec<usize> = (0..size)
        .map(|v| {
            let x = v & ((1 << n) - 1);
            if x <= l {
                v ^ (1 << n)
            } else {
                v
            }
        })
        .collect();
    let mut circuit = layout(n)?;
    circuit.push(Gate::new(
        GateKind::Permutation(Arc::new(table)),
        (0..=n).collect(),
        Vec::new(),
    ))?;
    Ok(circuit)
}

fn check_level(l: usize, n: usize) -> Result<()> {
    if n == 0 || n > 20 {
        return validation(format!("comparator width {n} out of range"));
    }
    if l >= 1 << n {
        return validation(format!("level {l} out of range for {n} qubits"));
    }
    Ok(())
}

fn layout(n: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(2 * n + 1);
    circuit.add_register("state", 0, n)?;
    circuit.add_register("flag", n, 1)?;
    circuit.add_register("carry", n + 1, n)?;
    Ok(circuit)
}
