//! Symmetrized histograms on affine grids.

use crate::circuits::{AffineGrid, DiscreteDistribution};
use crate::error::{validation, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Discretized {
    pub dist: DiscreteDistribution,
    /// Samples outside the grid, counted into the edge bins.
    pub clipped: usize,
}

/// Histogram of `samples` over the `2^n` bins centered on `grid.value(i)`,
/// symmetrized as `p_i <- (p_i + p_{N-1-i}) / 2`.
pub fn discretize(samples: &[f64], n: usize, grid: AffineGrid) -> Result<Discretized> {
    if n == 0 || n > 20 {
        return validation(format!("bin count exponent {n} outside 1..=20"));
    }
    if samples.is_empty() {
        return validation("no samples to discretize");
    }
    if !(grid.slope > 0.0) {
        return validation(format!("grid slope must be positive, got {}", grid.slope));
    }
    let bins = 1usize << n;
    let mut counts = vec![0usize; bins];
    let mut clipped = 0;
    for &s in samples {
        if !s.is_finite() {
            return validation("samples must be finite");
        }
        let pos = ((s - grid.offset) / grid.slope).round();
        if pos < 0.0 || pos > (bins - 1) as f64 {
            clipped += 1;
        }
        counts[pos.clamp(0.0, (bins - 1) as f64) as usize] += 1;
    }
    let total = samples.len() as f64;
    let probs: Vec<f64> = (0..bins)
        .map(|i| (counts[i] + counts[bins - 1 - i]) as f64 / (2.0 * total))
        .collect();
    Ok(Discretized {
        dist: DiscreteDistribution::new(probs, grid)?,
        clipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_clipped() {
        let grid = AffineGrid::new(1.0, -1.5);
        let d = discretize(&[-1.5, -0.4, 0.6, 0.7, 9.0], 2, grid).unwrap();
        assert_eq!(d.clipped, 1);
        let p = d.dist.probs();
        for i in 0..4 {
            assert_eq!(p[i], p[3 - i]);
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_input_is_unchanged() {
        let grid = AffineGrid::new(1.0, -1.5);
        let d = discretize(&[-1.5, -0.5, -0.5, 0.5, 0.5, 1.5], 2, grid).unwrap();
        for (p, q) in d.dist.probs().iter().zip([1.0, 2.0, 2.0, 1.0]) {
            assert!((p - q / 6.0).abs() < 1e-15);
        }
        assert!(discretize(&[], 2, grid).is_err());
    }
}
