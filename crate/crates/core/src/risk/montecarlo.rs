//! Classical Monte Carlo baseline.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::oracle::moments;
use super::report::{Method, RiskReport};
use crate::circuits::{BinaryPolynomial, DiscreteDistribution};
use crate::error::{validation, Result};

/// 97.5% standard normal quantile.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// Sample mean of `f(X)`.
    pub estimate: f64,
    /// `1.96 sigma / sqrt(M)` with the exact standard deviation `sigma`.
    pub half_width: f64,
    pub exact_std: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Draw `samples` indices from `dist`.
pub fn sample_indices(dist: &DiscreteDistribution, samples: u64, seed: u64) -> Result<Vec<usize>> {
    if samples == 0 {
        return validation("Monte Carlo needs at least one sample");
    }
    let index =
        WeightedIndex::new(dist.probs()).map_err(|e| crate::Error::Validation(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples).map(|_| index.sample(&mut rng)).collect())
}

/// Sample mean of `f(X)` with the optimistic interval built from the exact
/// standard deviation.
pub fn monte_carlo_baseline(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    let values: Vec<f64> = (0..dist.len()).map(|i| f.eval(i as u64)).collect();
    let draws = sample_indices(dist, samples, seed)?;
    let estimate = draws.iter().map(|&i| values[i]).sum::<f64>() / samples as f64;
    let exact_std = moments(dist, f).1.sqrt();
    Ok(McEstimate {
        estimate,
        half_width: Z_95 * exact_std / (samples as f64).sqrt(),
        exact_std,
        samples,
        seed,
    })
}

/// All four measures from one set of samples. VaR and CVaR are the
/// empirical quantile and tail mean on the index scale.
pub fn monte_carlo_report(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    alpha: f64,
    samples: u64,
    seed: u64,
) -> Result<RiskReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return validation(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let draws = sample_indices(dist, samples, seed)?;
    let values: Vec<f64> = draws.iter().map(|&i| f.eval(i as u64)).collect();
    let count = samples as f64;
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;

    let mut histogram = vec![0u64; dist.len()];
    for &i in &draws {
        histogram[i] += 1;
    }
    let need = ((1.0 - alpha) * count).ceil() as u64;
    let mut cum = 0;
    let mut l = dist.len() - 1;
    for (i, &h) in histogram.iter().enumerate() {
        cum += h;
        if cum >= need {
            l = i;
            break;
        }
    }
    let tail: u64 = histogram[..=l].iter().sum();
    let cvar_index = histogram[..=l]
        .iter()
        .enumerate()
        .map(|(i, &h)| i as f64 * h as f64)
        .sum::<f64>()
        / tail as f64;
    let exact_std = moments(dist, f).1.sqrt();
    let grid = dist.grid();

    let mut r = RiskReport::empty(Method::MonteCarlo, alpha);
    r.expectation = Some(mean);
    r.expectation_bound = Some(Z_95 * exact_std / count.sqrt());
    r.variance = Some(variance);
    r.var_index = Some(l);
    r.var_value = Some(dist.value(l));
    r.var_loss = Some(-dist.value(l));
    r.var_probability = Some(tail as f64 / count);
    r.cvar_index = Some(cvar_index);
    r.cvar_value = Some(grid.slope * cvar_index + grid.offset);
    r.shots = Some(samples);
    r.seed = Some(seed);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::AffineGrid;

    #[test]
    fn tbill_half_width() {
        let d = DiscreteDistribution::new(vec![0.7, 0.3], AffineGrid::index()).unwrap();
        let mc = monte_carlo_baseline(&d, &BinaryPolynomial::bit(0), 16, 1).unwrap();
        assert!((mc.half_width - 0.898 / 4.0).abs() < 1e-3);
        assert!((mc.half_width - 0.2245).abs() < 1e-4);
    }

    #[test]
    fn point_mass_has_zero_width() {
        let d = DiscreteDistribution::point_mass(2, 3);
        let f = BinaryPolynomial::linear(&[1.0 / 3.0, 2.0 / 3.0], 0.0);
        let mc = monte_carlo_baseline(&d, &f, 100, 1).unwrap();
        assert_eq!(mc.half_width, 0.0);
        assert!((mc.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_matches_oracle_for_many_samples() {
        let d = DiscreteDistribution::uniform(3);
        let f = BinaryPolynomial::linear(&[1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0], 0.0);
        let r = monte_carlo_report(&d, &f, 0.6, 200_000, 3).unwrap();
        assert!((r.expectation.unwrap() - 0.5).abs() < 0.01);
        assert_eq!(r.var_index, Some(3));
        assert!((r.cvar_index.unwrap() - 1.5).abs() < 0.02);
        assert!(monte_carlo_baseline(&d, &f, 0, 0).is_err());
    }
}
