//! Gate definitions.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{structural, validation, Result};

/// A 2x2 complex matrix in row-major order: `[m00, m01, m10, m11]`.
pub type Matrix2 = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The operation a gate performs on its target(s), before controls.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    /// Rotation about Y by `theta` radians: `exp(-i theta Y / 2)`.
    Ry(f64),
    U2 {
        phi: f64,
        lambda: f64,
    },
    U3 {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    /// Exchanges the two target qubits.
    Swap,
    /// Classical reversible function on the target qubits: basis value `v`
    /// (first target = least significant bit) is mapped to `table[v]`.
    Permutation(Arc<Vec<usize>>),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Ry(_) => "RY",
            GateKind::U2 { .. } => "U2",
            GateKind::U3 { .. } => "U3",
            GateKind::Swap => "SWAP",
            GateKind::Permutation(_) => "PERM",
        }
    }

    /// Number of target qubits this kind acts on, if fixed.
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::Swap => Some(2),
            GateKind::Permutation(_) => None,
            _ => Some(1),
        }
    }

    /// Matrix of a single-target kind.
    pub fn matrix(&self) -> Option<Matrix2> {
        let m = match *self {
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                [h, h, h, -h]
            }
            GateKind::X => [ZERO, ONE, ONE, ZERO],
            GateKind::Z => [ONE, ZERO, ZERO, -ONE],
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                [
                    Complex64::new(c, 0.0),
                    Complex64::new(-s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(c, 0.0),
                ]
            }
            GateKind::U2 { phi, lambda } => u2_matrix(phi, lambda),
            GateKind::U3 { theta, phi, lambda } => u3_matrix(theta, phi, lambda),
            GateKind::Swap | GateKind::Permutation(_) => return None,
        };
        Some(m)
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::H | GateKind::X | GateKind::Z | GateKind::Swap => self.clone(),
            GateKind::Ry(theta) => GateKind::Ry(-theta),
            GateKind::U2 { phi, lambda } => GateKind::U3 {
                theta: -std::f64::consts::FRAC_PI_2,
                phi: -lambda,
                lambda: -phi,
            },
            GateKind::U3 { theta, phi, lambda } => GateKind::U3 {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            GateKind::Permutation(table) => {
                let mut inv = vec![0; table.len()];
                for (v, &w) in table.iter().enumerate() {
                    inv[w] = v;
                }
                GateKind::Permutation(Arc::new(inv))
            }
        }
    }
}

/// `U2(phi, lambda) = 1/sqrt(2) [[1, -e^{i lambda}], [e^{i phi}, e^{i(lambda + phi)}]]`.
pub fn u2_matrix(phi: f64, lambda: f64) -> Matrix2 {
    let s = FRAC_1_SQRT_2;
    [
        Complex64::new(s, 0.0),
        -Complex64::from_polar(s, lambda),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(s, lambda + phi),
    ]
}

/// `U3(theta, phi, lambda) = [[cos(theta/2), -e^{i lambda} sin(theta/2)],
/// [e^{i phi} sin(theta/2), e^{i(lambda + phi)} cos(theta/2)]]`.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        Complex64::new(c, 0.0),
        -Complex64::from_polar(s, lambda),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(c, lambda + phi),
    ]
}

/// One gate: a kind applied to `targets`, conditioned on every qubit in
/// `controls` being |1>.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<usize>) -> Gate {
        Gate {
            kind,
            targets,
            controls,
        }
    }

    pub fn single(kind: GateKind, target: usize) -> Gate {
        Gate::new(kind, vec![target], Vec::new())
    }

    pub fn h(target: usize) -> Gate {
        Gate::single(GateKind::H, target)
    }

    pub fn x(target: usize) -> Gate {
        Gate::single(GateKind::X, target)
    }

    pub fn z(target: usize) -> Gate {
        Gate::single(GateKind::Z, target)
    }

    pub fn ry(theta: f64, target: usize) -> Gate {
        Gate::single(GateKind::Ry(theta), target)
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::new(GateKind::X, vec![target], vec![control])
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Gate {
        Gate::new(GateKind::X, vec![target], vec![c0, c1])
    }

    pub fn mcry(theta: f64, controls: Vec<usize>, target: usize) -> Gate {
        Gate::new(GateKind::Ry(theta), vec![target], controls)
    }

    pub fn mcz(controls: Vec<usize>, target: usize) -> Gate {
        Gate::new(GateKind::Z, vec![target], controls)
    }

    /// Phase gate `diag(1, e^{i lambda})`, expressed as `U3(0, 0, lambda)`.
    pub fn phase(lambda: f64, target: usize) -> Gate {
        Gate::single(
            GateKind::U3 {
                theta: 0.0,
                phi: 0.0,
                lambda,
            },
            target,
        )
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Swap, vec![a, b], Vec::new())
    }

    pub fn permutation(table: Vec<usize>, targets: Vec<usize>) -> Gate {
        Gate::new(GateKind::Permutation(Arc::new(table)), targets, Vec::new())
    }

    pub fn with_control(mut self, control: usize) -> Gate {
        self.controls.push(control);
        self
    }

    pub fn inverse(&self) -> Gate {
        Gate::new(
            self.kind.inverse(),
            self.targets.clone(),
            self.controls.clone(),
        )
    }

    pub fn is_cnot(&self) -> bool {
        self.kind == GateKind::X && self.controls.len() == 1
    }

    /// All qubits touched by the gate.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(self.controls.iter()).copied()
    }

    /// Check index bounds, distinctness and (for permutations) bijectivity.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if let Some(arity) = self.kind.arity() {
            if self.targets.len() != arity {
                return structural(format!(
                    "{} expects {arity} target(s), got {}",
                    self.kind.name(),
                    self.targets.len()
                ));
            }
        } else if self.targets.is_empty() {
            return structural("permutation gate needs at least one target");
        }
        let mut seen = 0u128;
        for q in self.qubits() {
            if q >= num_qubits {
                return structural(format!(
                    "qubit {q} out of range for {num_qubits}-qubit register"
                ));
            }
            if q >= 128 {
                return structural("more than 128 qubits is not supported");
            }
            if seen & (1u128 << q) != 0 {
                return structural(format!(
                    "qubit {q} used twice in one {} gate",
                    self.kind.name()
                ));
            }
            seen |= 1u128 << q;
        }
        if let GateKind::Permutation(table) = &self.kind {
            let size = 1usize << self.targets.len();
            if table.len() != size {
                return validation(format!(
                    "permutation table has {} entries, expected {size}",
                    table.len()
                ));
            }
            let mut hit = vec![false; size];
            for &w in table.iter() {
                if w >= size || hit[w] {
                    return validation("permutation table is not a bijection");
                }
                hit[w] = true;
            }
        }
        Ok(())
    }

    pub(crate) fn params(&self) -> Vec<f64> {
        match self.kind {
            GateKind::Ry(theta) => vec![theta],
            GateKind::U2 { phi, lambda } => vec![phi, lambda],
            GateKind::U3 { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }
}

/// Text form: `KIND targets... ; controls... ; params...`.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "{} {} ; {} ;",
            self.kind.name(),
            join(&self.targets),
            join(&self.controls)
        )?;
        if let GateKind::Permutation(table) = &self.kind {
            for v in table.iter() {
                write!(f, " {v}")?;
            }
        } else {
            for p in self.params() {
                // `{:?}` prints the shortest representation that round-trips.
                write!(f, " {p:?}")?;
            }
        }
        Ok(())
    }
}
