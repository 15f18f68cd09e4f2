//! Exact risk measures by enumeration.

use super::report::{Method, RiskReport};
use crate::circuits::{BinaryPolynomial, DiscreteDistribution};
use crate::error::{validation, Result};

/// `l_alpha`: smallest index with `P[X <= l] >= 1 - alpha`.
pub fn var_index(dist: &DiscreteDistribution, alpha: f64) -> usize {
    let target = 1.0 - alpha;
    let mut cum = 0.0;
    for (i, p) in dist.probs().iter().enumerate() {
        cum += p;
        // Guard against rounding just below the target.
        if cum >= target - 1e-12 {
            return i;
        }
    }
    dist.len() - 1
}

/// `E[X | X <= l]` on the index scale, or 0 when `P[X <= l] = 0`.
pub fn conditional_index_mean(dist: &DiscreteDistribution, l: usize) -> f64 {
    let probs = &dist.probs()[..=l];
    let mass: f64 = probs.iter().sum();
    if mass <= 0.0 {
        return 0.0;
    }
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| i as f64 * p)
        .sum::<f64>()
        / mass
}

/// `E[f(X)]` and `Var[f(X)]`.
pub fn moments(dist: &DiscreteDistribution, f: &BinaryPolynomial) -> (f64, f64) {
    let mut e = 0.0;
    let mut e2 = 0.0;
    for (i, p) in dist.probs().iter().enumerate() {
        let v = f.eval(i as u64);
        e += p * v;
        e2 += p * v * v;
    }
    (e, (e2 - e * e).max(0.0))
}

/// Ground-truth report for `dist` and objective `f`.
pub fn classical_oracle(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    alpha: f64,
) -> Result<RiskReport> {
    if dist.num_qubits() > 20 {
        return validation("oracle enumeration is limited to 2^20 points");
    }
    if !(0.0..=1.0).contains(&alpha) {
        return validation(format!("alpha {alpha} outside [0, 1]"));
    }
    let (e, var) = moments(dist, f);
    let l = var_index(dist, alpha);
    let cvar_index = conditional_index_mean(dist, l);
    let grid = dist.grid();
    let mut r = RiskReport::empty(Method::Oracle, alpha);
    r.expectation = Some(e);
    r.variance = Some(var);
    r.var_index = Some(l);
    r.var_value = Some(dist.value(l));
    r.var_loss = Some(-dist.value(l));
    r.var_probability = Some(dist.cdf(l));
    r.cvar_index = Some(cvar_index);
    r.cvar_value = Some(grid.slope * cvar_index + grid.offset);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::AffineGrid;

    #[test]
    fn bernoulli_moments() {
        let d = DiscreteDistribution::new(vec![0.7, 0.3], AffineGrid::index()).unwrap();
        let r = classical_oracle(&d, &BinaryPolynomial::bit(0), 0.5).unwrap();
        assert!((r.expectation.unwrap() - 0.3).abs() < 1e-15);
        assert!((r.variance.unwrap() - 0.21).abs() < 1e-15);
    }

    #[test]
    fn uniform_quantile() {
        let d = DiscreteDistribution::uniform(3);
        assert_eq!(var_index(&d, 0.5), 3);
        let d = DiscreteDistribution::uniform(2);
        assert_eq!(var_index(&d, 0.5), 1);
        assert!((conditional_index_mean(&d, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_mass() {
        let d = DiscreteDistribution::point_mass(3, 5);
        for &alpha in &[0.01, 0.5, 0.99] {
            assert_eq!(var_index(&d, alpha), 5);
        }
    }
}
