//! Discrete distributions and their loading circuits.

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::qsim::{Circuit, Gate};

/// Affine map from bin index to physical value: `slope * i + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineGrid {
    pub slope: f64,
    pub offset: f64,
}

impl AffineGrid {
    pub fn new(slope: f64, offset: f64) -> AffineGrid {
        AffineGrid { slope, offset }
    }

    /// The identity map `i -> i`.
    pub fn index() -> AffineGrid {
        AffineGrid::new(1.0, 0.0)
    }

    /// Grid with `points` values spread evenly over `[low, high]`.
    pub fn spanning(low: f64, high: f64, points: usize) -> AffineGrid {
        let steps = points.saturating_sub(1).max(1) as f64;
        AffineGrid::new((high - low) / steps, low)
    }

    pub fn value(&self, i: usize) -> f64 {
        self.slope * i as f64 + self.offset
    }
}

/// Probabilities on `{0, ..., 2^n - 1}` with an affine value grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
    grid: AffineGrid,
    n: usize,
}

impl DiscreteDistribution {
    /// Validate and normalize. The input must be non-negative with a total
    /// within 1e-9 of one; it is rescaled to sum to one exactly.
    pub fn new(probs: Vec<f64>, grid: AffineGrid) -> Result<DiscreteDistribution> {
        let len = probs.len();
        if len == 0 || !len.is_power_of_two() {
            return validation(format!("distribution length {len} is not a power of two"));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(**p >= 0.0)) {
            return validation(format!("probability {i} is {p}, must be non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return validation(format!("probabilities sum to {total}, not 1"));
        }
        let probs = probs.into_iter().map(|p| p / total).collect();
        Ok(DiscreteDistribution {
            probs,
            grid,
            n: len.trailing_zeros() as usize,
        })
    }

    /// Normalize arbitrary non-negative weights.
    pub fn from_weights(weights: Vec<f64>, grid: AffineGrid) -> Result<DiscreteDistribution> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return validation("weights have no positive mass");
        }
        DiscreteDistribution::new(weights.into_iter().map(|w| w / total).collect(), grid)
    }

    pub fn point_mass(n: usize, index: usize) -> DiscreteDistribution {
        let mut probs = vec![0.0; 1 << n];
        probs[index] = 1.0;
        DiscreteDistribution::new(probs, AffineGrid::index()).expect("valid point mass")
    }

    pub fn uniform(n: usize) -> DiscreteDistribution {
        let len = 1usize << n;
        DiscreteDistribution::new(vec![1.0 / len as f64; len], AffineGrid::index())
            .expect("valid uniform")
    }

    /// Independent joint distribution with `low` in the low bits of the
    /// index and `high` above it. The grid is the index grid.
    pub fn product(
        low: &DiscreteDistribution,
        high: &DiscreteDistribution,
    ) -> DiscreteDistribution {
        let mut probs = Vec::with_capacity(low.len() * high.len());
        for ph in &high.probs {
            for pl in &low.probs {
                probs.push(pl * ph);
            }
        }
        DiscreteDistribution::new(probs, AffineGrid::index())
            .expect("product of valid distributions")
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn grid(&self) -> AffineGrid {
        self.grid
    }

    pub fn with_grid(mut self, grid: AffineGrid) -> DiscreteDistribution {
        self.grid = grid;
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn value(&self, i: usize) -> f64 {
        self.grid.value(i)
    }

    /// `P[X <= l]`.
    pub fn cdf(&self, l: usize) -> f64 {
        self.probs[..=l.min(self.len() - 1)].iter().sum()
    }
}

/// Circuit on `n` qubits mapping `|0>` to `sum_i sqrt(p_i) |i>`.
///
/// Qubits are loaded from the most significant down. Qubit `q` is rotated by
/// `2 asin(sqrt(P[bit q = 1 | higher bits]))` through a uniformly controlled
/// rotation on the higher bits, restricted to the bits its angles actually
/// depend on.
pub fn prepare_distribution(dist: &DiscreteDistribution) -> Circuit {
    let n = dist.num_qubits();
    let mut circuit = Circuit::new(n);
    circuit.add_register("state", 0, n).expect("fits");
    for q in (0..n).rev() {
        let high = n - q - 1;
        let angles: Vec<f64> = (0..1usize << high)
            .map(|j| {
                let (mut m0, mut m1) = (0.0, 0.0);
                for low in 0..1usize << q {
                    m0 += dist.probs[(j << (q + 1)) | low];
                    m1 += dist.probs[(j << (q + 1)) | (1 << q) | low];
                }
                let total = m0 + m1;
                if total > 0.0 {
                    2.0 * (m1 / total).clamp(0.0, 1.0).sqrt().asin()
                } else {
                    0.0
                }
            })
            .collect();
        let controls: Vec<usize> = (q + 1..n).collect();
        let gates = uniformly_controlled_ry(&angles, &controls, q);
        circuit.extend(gates).expect("valid qubits");
    }
    circuit
}

/// Gates applying `Ry(angles[j])` to `target` when the control register
/// (`controls[0]` least significant) holds `j`.
///
/// Controls on which the angles do not depend are dropped. The remaining
/// `k` controls use the Gray-code construction with `2^k` rotations and
/// `2^k` CNOTs.
pub fn uniformly_controlled_ry(angles: &[f64], controls: &[usize], target: usize) -> Vec<Gate> {
    assert_eq!(angles.len(), 1 << controls.len());
    let (angles, controls) = prune_controls(angles, controls);
    let k = controls.len();
    if k == 0 {
        return if angles[0] != 0.0 {
            vec![Gate::ry(angles[0], target)]
        } else {
            Vec::new()
        };
    }
    if angles.iter().all(|&a| a == 0.0) {
        return Vec::new();
    }
    let size = 1usize << k;
    let gray = |i: usize| i ^ (i >> 1);
    let mut gates = Vec::with_capacity(2 * size);
    for i in 0..size {
        let g = gray(i);
        let beta: f64 = angles
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if (j & g).count_ones() % 2 == 0 {
                    *a
                } else {
                    -*a
                }
            })
            .sum::<f64>()
            / size as f64;
        if beta != 0.0 {
            gates.push(Gate::ry(beta, target));
        }
        let changed = (g ^ gray((i + 1) % size)).trailing_zeros() as usize;
        gates.push(Gate::cnot(controls[changed], target));
    }
    gates
}

fn prune_controls(angles: &[f64], controls: &[usize]) -> (Vec<f64>, Vec<usize>) {
    const TOL: f64 = 1e-14;
    let mut angles = angles.to_vec();
    let mut controls = controls.to_vec();
    let mut b = 0;
    while b < controls.len() {
        let bit = 1usize << b;
        let independent = (0..angles.len())
            .filter(|j| j & bit == 0)
            .all(|j| (angles[j] - angles[j | bit]).abs() <= TOL);
        if independent {
            let kept: Vec<f64> = (0..angles.len())
                .filter(|j| j & bit == 0)
                .map(|j| angles[j])
                .collect();
            angles = kept;
            controls.remove(b);
        } else {
            b += 1;
        }
    }
    (angles, controls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::QuantumState;

    #[test]
    fn uniform_bit_is_single_rotation() {
        let d = DiscreteDistribution::new(vec![0.5, 0.5], AffineGrid::index()).unwrap();
        let c = prepare_distribution(&d);
        assert_eq!(c.len(), 1);
        match c.gates()[0].kind {
            crate::qsim::GateKind::Ry(theta) => {
                assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15)
            }
            ref other => panic!("unexpected gate {other:?}"),
        }
    }

    #[test]
    fn loads_tbill() {
        let d = DiscreteDistribution::new(vec![0.7, 0.3], AffineGrid::index()).unwrap();
        let mut s = QuantumState::zero(1);
        prepare_distribution(&d).apply(&mut s).unwrap();
        assert!((s.amplitudes()[0].re - 0.7f64.sqrt()).abs() < 1e-12);
        assert!((s.amplitudes()[1].re - 0.3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn product_distribution_drops_cross_controls() {
        let a = DiscreteDistribution::new(vec![0.1, 0.2, 0.3, 0.4], AffineGrid::index()).unwrap();
        let b = DiscreteDistribution::new(vec![0.6, 0.4], AffineGrid::index()).unwrap();
        let joint = DiscreteDistribution::product(&a, &b);
        let c = prepare_distribution(&joint);
        // Qubit 1 must not depend on qubit 2.
        assert!(c
            .gates()
            .iter()
            .all(|g| !(g.targets == vec![1] && g.controls.contains(&2))));
        let mut s = QuantumState::zero(3);
        c.apply(&mut s).unwrap();
        for (i, p) in joint.probs().iter().enumerate() {
            assert!((s.amplitudes()[i].norm_sqr() - p).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(DiscreteDistribution::new(vec![0.5, 0.25, 0.25], AffineGrid::index()).is_err());
        assert!(DiscreteDistribution::new(vec![1.5, -0.5], AffineGrid::index()).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.6], AffineGrid::index()).is_err());
    }

    #[test]
    fn zero_tail_gets_no_rotation() {
        let d = DiscreteDistribution::point_mass(3, 0);
        assert!(prepare_distribution(&d).is_empty());
    }
}
