//! Circuit constructors for amplitude estimation.
//!
//! Layouts: a distribution register occupies qubits `[0, n)`, the objective
//! (or comparator flag) follows at `n`, and any carries or ancillas come
//! after that. The amplitude-estimation circuit appends its evaluation
//! register after all qubits of `A`.

mod comparator;
mod distribution;
mod grover;
mod polynomial;
mod resources;
mod rotation;

pub use comparator::{comparator, comparator_oracle};
pub use distribution::{
    prepare_distribution, uniformly_controlled_ry, AffineGrid, DiscreteDistribution,
};
pub use grover::{
    amplitude_estimation_circuit, grover_operator, inverse_qft, qft, AEProblem, PowerRule,
};
pub use polynomial::{BinaryPolynomial, PolynomialSpec};
pub use resources::{cnot_count, decompose, ResourceReport};
pub use rotation::{
    binary_rotation_gates, cvar_objective, objective_angle, objective_operator,
    polynomial_rotation, square_objective_operator,
};
