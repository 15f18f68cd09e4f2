//! Dense statevector and gate kernels.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gate::{Gate, GateKind, Matrix2};
use crate::error::{structural, validation, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 30;

/// Amplitude vector over `2^num_qubits` basis states. Qubit 0 is the least
/// significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// The all-zero basis state.
    pub fn zero(num_qubits: usize) -> QuantumState {
        QuantumState::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> QuantumState {
        assert!(num_qubits <= MAX_QUBITS, "register too large");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        QuantumState {
            num_qubits,
            amplitudes,
        }
    }

    /// Wrap an amplitude vector, checking length and normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<QuantumState> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return validation(format!(
                "amplitude vector length {len} is not a power of two"
            ));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return validation("register too large");
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return validation(format!("state norm {norm} differs from 1"));
        }
        Ok(QuantumState {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn renormalize(&mut self) {
        let scale = 1.0 / self.norm_sqr().sqrt();
        for a in &mut self.amplitudes {
            *a *= scale;
        }
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply one gate after validating it against the register.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.apply_gate_unchecked(gate);
        Ok(())
    }

    /// Apply a gate that is already known to be valid for this register.
    pub(crate) fn apply_gate_unchecked(&mut self, gate: &Gate) {
        let cmask = mask_of(&gate.controls);
        match &gate.kind {
            GateKind::X => self.apply_x(gate.targets[0], &gate.controls, cmask),
            GateKind::Z => self.apply_phase(
                gate.targets[0],
                &gate.controls,
                cmask,
                Complex64::new(-1.0, 0.0),
            ),
            GateKind::Ry(theta) => self.apply_ry(*theta, gate.targets[0], &gate.controls, cmask),
            GateKind::U3 { theta, phi, lambda } if *theta == 0.0 => self.apply_phase(
                gate.targets[0],
                &gate.controls,
                cmask,
                Complex64::from_polar(1.0, phi + lambda),
            ),
            GateKind::Swap => {
                self.apply_swap(gate.targets[0], gate.targets[1], &gate.controls, cmask)
            }
            GateKind::Permutation(table) => {
                self.apply_permutation(table, &gate.targets, &gate.controls, cmask)
            }
            kind => {
                let m = kind.matrix().expect("single-target kind");
                self.apply_matrix(&m, gate.targets[0], &gate.controls, cmask)
            }
        }
    }

    fn apply_x(&mut self, target: usize, controls: &[usize], cmask: usize) {
        let t = 1usize << target;
        let amps = &mut self.amplitudes;
        for_each_base(self.num_qubits, &[target], controls, |base| {
            let i = base | cmask;
            amps.swap(i, i | t);
        });
    }

    /// Multiply the amplitudes with the target bit set by `phase`.
    fn apply_phase(&mut self, target: usize, controls: &[usize], cmask: usize, phase: Complex64) {
        let t = 1usize << target;
        let amps = &mut self.amplitudes;
        for_each_base(self.num_qubits, &[target], controls, |base| {
            amps[base | cmask | t] *= phase;
        });
    }

    fn apply_ry(&mut self, theta: f64, target: usize, controls: &[usize], cmask: usize) {
        let t = 1usize << target;
        let (s, c) = (theta / 2.0).sin_cos();
        let amps = &mut self.amplitudes;
        for_each_base(self.num_qubits, &[target], controls, |base| {
            let i0 = base | cmask;
            let i1 = i0 | t;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = a0 * c - a1 * s;
            amps[i1] = a0 * s + a1 * c;
        });
    }

    pub(crate) fn apply_matrix(
        &mut self,
        m: &Matrix2,
        target: usize,
        controls: &[usize],
        cmask: usize,
    ) {
        let t = 1usize << target;
        let amps = &mut self.amplitudes;
        for_each_base(self.num_qubits, &[target], controls, |base| {
            let i0 = base | cmask;
            let i1 = i0 | t;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        });
    }

    fn apply_swap(&mut self, a: usize, b: usize, controls: &[usize], cmask: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        let amps = &mut self.amplitudes;
        for_each_base(self.num_qubits, &[a, b], controls, |base| {
            let i = base | cmask;
            amps.swap(i | ba, i | bb);
        });
    }

    fn apply_permutation(
        &mut self,
        table: &[usize],
        targets: &[usize],
        controls: &[usize],
        cmask: usize,
    ) {
        let size = table.len();
        let offsets: Vec<usize> = (0..size).map(|v| deposit_value(v, targets)).collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        let amps = &mut self.amplitudes;
        for_each_base(self.num_qubits, targets, controls, |base| {
            let i = base | cmask;
            for (v, slot) in buf.iter_mut().enumerate() {
                *slot = amps[i | offsets[v]];
            }
            for (v, &w) in table.iter().enumerate() {
                amps[i | offsets[w]] = buf[v];
            }
        });
    }

    /// Marginal Born-rule probabilities over `qubits`. Entry `v` is the
    /// probability of reading value `v`, with `qubits[0]` as its least
    /// significant bit.
    pub fn measure_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_measured(qubits, self.num_qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p != 0.0 {
                probs[extract_value(i, qubits)] += p;
            }
        }
        Ok(probs)
    }

    /// Draw `shots` independent measurements of `qubits`.
    pub fn sample_counts(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<CountsMap> {
        let probs = self.measure_probabilities(qubits)?;
        CountsMap::sample(&probs, qubits.to_vec(), shots, seed)
    }

    /// Write one line per basis index: `index<TAB>re<TAB>im`.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (i, a) in self.amplitudes.iter().enumerate() {
            writeln!(w, "{i}\t{:?}\t{:?}", a.re, a.im)?;
        }
        Ok(())
    }
}

pub(crate) fn check_measured(qubits: &[usize], num_qubits: usize) -> Result<()> {
    if qubits.len() > 63 {
        return validation("cannot measure more than 63 qubits");
    }
    for (k, &q) in qubits.iter().enumerate() {
        if q >= num_qubits {
            return structural(format!("measured qubit {q} out of range"));
        }
        if qubits[..k].contains(&q) {
            return validation(format!("qubit {q} listed twice for measurement"));
        }
    }
    Ok(())
}

pub(crate) fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | (1 << q))
}

/// Scatter the bits of `v` onto the positions `qubits`.
pub(crate) fn deposit_value(v: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((v >> k) & 1) << q))
}

/// Gather the bits of `index` at positions `qubits` into a packed value.
pub(crate) fn extract_value(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((index >> q) & 1) << k))
}

/// Visit every basis index whose bits at `fixed_a` and `fixed_b` are all zero.
fn for_each_base(
    num_qubits: usize,
    fixed_a: &[usize],
    fixed_b: &[usize],
    mut f: impl FnMut(usize),
) {
    let mut fixed: Vec<usize> = fixed_a.iter().chain(fixed_b).copied().collect();
    fixed.sort_unstable();
    let count = 1usize << (num_qubits - fixed.len());
    match fixed.as_slice() {
        [p] => {
            let low = (1usize << p) - 1;
            for k in 0..count {
                f(((k & !low) << 1) | (k & low));
            }
        }
        _ => {
            for k in 0..count {
                let mut i = k;
                for &p in &fixed {
                    let low = (1usize << p) - 1;
                    i = ((i & !low) << 1) | (i & low);
                }
                f(i);
            }
        }
    }
}

/// Measurement outcomes over a qubit subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsMap {
    pub qubits: Vec<usize>,
    pub counts: BTreeMap<u64, u64>,
    pub shots: u64,
}

impl CountsMap {
    /// Multinomial sample of `shots` draws from `probs`.
    pub fn sample(probs: &[f64], qubits: Vec<usize>, shots: u64, seed: u64) -> Result<CountsMap> {
        if shots == 0 {
            return validation("shots must be at least 1");
        }
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut total = 0.0;
        for &p in probs {
            total += p.max(0.0);
            cumulative.push(total);
        }
        if total <= 0.0 {
            return validation("probability vector has no mass");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let uniform = Uniform::new(0.0, total).expect("positive total");
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let r = uniform.sample(&mut rng);
            let v = cumulative.partition_point(|&c| c <= r).min(probs.len() - 1);
            *counts.entry(v as u64).or_insert(0) += 1;
        }
        Ok(CountsMap {
            qubits,
            counts,
            shots,
        })
    }

    pub fn get(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// Bitstring for `value`, most significant measured qubit first.
    pub fn bitstring(&self, value: u64) -> String {
        (0..self.qubits.len())
            .rev()
            .map(|k| if (value >> k) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for CountsMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&v, &c) in &self.counts {
            writeln!(f, "{}\t{c}", self.bitstring(v))?;
        }
        Ok(())
    }
}
