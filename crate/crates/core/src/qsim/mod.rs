//! Dense statevector simulation.
//!
//! Basis index `i` stores qubit 0 in its least significant bit.

mod circuit;
mod gate;
mod noise;
mod state;

pub use circuit::{apply_circuit, Circuit, Register};
pub use gate::{u2_matrix, u3_matrix, Gate, GateKind, Matrix2};
pub use noise::{crosstalk_blocks, run_noisy, run_noisy_event, NoiseModel, NoisyResult};
pub use state::{CountsMap, QuantumState, MAX_QUBITS};

use crate::error::Result;

/// Marginal Born-rule probabilities of `qubits` in `state`.
pub fn measure_probabilities(state: &QuantumState, qubits: &[usize]) -> Result<Vec<f64>> {
    state.measure_probabilities(qubits)
}

/// Seeded multinomial sample of `shots` measurements of `qubits`.
pub fn sample_counts(
    state: &QuantumState,
    qubits: &[usize],
    shots: u64,
    seed: u64,
) -> Result<CountsMap> {
    state.sample_counts(qubits, shots, seed)
}
