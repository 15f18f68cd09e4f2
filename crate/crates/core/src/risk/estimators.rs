//! Quantum estimators of expectation, variance, VaR and CVaR.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::problems::{cdf_problem, cvar_problem, expectation_problem, second_moment_problem};
use super::report::{Method, RiskReport};
use crate::ae::{run_ae, AEResult};
use crate::approx::{approx_error_bound, unmap, ApproxParams};
use crate::circuits::{BinaryPolynomial, DiscreteDistribution};
use crate::error::{validation, Result};
use crate::seed::derive;

const TAG_EXPECTATION: u64 = 1;
const TAG_SECOND_MOMENT: u64 = 2;
const TAG_VAR: u64 = 3;
const TAG_CVAR: u64 = 4;

/// Evaluation-register size, shot count and seed of each AE run.
///
/// `shots = 0` replaces sampling by the modal outcome of the exact
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AESettings {
    pub m: usize,
    pub shots: u64,
    pub seed: u64,
}

impl AESettings {
    pub fn new(m: usize, shots: u64, seed: u64) -> AESettings {
        AESettings { m, shots, seed }
    }

    pub fn samples(&self) -> u64 {
        1 << self.m
    }

    fn with_seed(&self, tag: u64, index: u64) -> AESettings {
        AESettings {
            seed: derive(self.seed, tag, index),
            ..*self
        }
    }
}

/// Error bound `pi / M + pi^2 / M^2` of one AE estimate.
pub fn ae_error_bound(m: usize) -> f64 {
    let big_m = (1u64 << m) as f64;
    PI / big_m + (PI / big_m).powi(2)
}

/// A scalar estimate with its error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub bound: f64,
    pub ae: AEResult,
}

fn run(problem: crate::circuits::AEProblem, settings: AESettings) -> Result<AEResult> {
    run_ae(&problem, settings.shots, settings.seed)
}

/// `E[f(X)]` from the encoded objective, un-mapped and clipped to `[0, 1]`.
///
/// The bound is `(pi / M + approx_error_bound) / c`.
pub fn estimate_expectation(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    params: &ApproxParams,
    settings: AESettings,
) -> Result<Estimate> {
    let problem = expectation_problem(dist, f, params, settings.m)?;
    let ae = run(problem, settings.with_seed(TAG_EXPECTATION, 0))?;
    let value = unmap(ae.estimate, params.c).clamp(0.0, 1.0);
    let bound = (PI / settings.samples() as f64 + approx_error_bound(params)) / params.c;
    Ok(Estimate { value, bound, ae })
}

/// `Var[f(X)] = E[f^2] - E[f]^2`, with `E[f^2]` read from `E[sin^2(c f)] / c^2`.
///
/// With `d1` the expectation bound, the bound is `d2 + 2 d1 + d1^2` where
/// `d2 = (pi / M + c^2 - sin^2 c) / c^2` covers the second moment.
pub fn estimate_variance(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    params: &ApproxParams,
    settings: AESettings,
) -> Result<(Estimate, Estimate)> {
    let mean = estimate_expectation(dist, f, params, settings)?;
    let c = params.c;
    let problem = second_moment_problem(dist, f, c, settings.m)?;
    let ae = run(problem, settings.with_seed(TAG_SECOND_MOMENT, 0))?;
    let second = (ae.estimate / (c * c)).clamp(0.0, 1.0);
    let value = (second - mean.value * mean.value).max(0.0);
    let d1 = mean.bound;
    let d2 = (PI / settings.samples() as f64 + c * c - c.sin().powi(2)) / (c * c);
    let bound = d2 + 2.0 * d1 + d1 * d1;
    Ok((Estimate { value, bound, ae }, mean))
}

/// One bisection step: the AE estimate of `P[X <= l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub level: usize,
    pub ae: AEResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarEstimate {
    pub alpha: f64,
    /// `l_alpha` on the index scale.
    pub index: usize,
    /// Grid value at `index`.
    pub value: f64,
    /// Estimated `P[X <= l_alpha]`; 1 when the top level was never probed.
    pub probability: f64,
    /// AE error bound of each probe.
    pub bound: f64,
    /// Some probe's interval contained `1 - alpha`.
    pub low_confidence: bool,
    pub probes: Vec<Probe>,
}

/// Smallest `l` whose estimated `P[X <= l]` reaches `1 - alpha`, by bisection
/// over `{0, ..., N - 1}` with at most `n` probes.
pub fn estimate_var(
    dist: &DiscreteDistribution,
    alpha: f64,
    settings: AESettings,
) -> Result<VarEstimate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return validation(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let target = 1.0 - alpha;
    let (mut lo, mut hi) = (0, dist.len() - 1);
    let mut probes = Vec::new();
    while lo < hi {
        let mid = (lo + hi) / 2;
        let problem = cdf_problem(dist, mid, settings.m)?;
        let ae = run(problem, settings.with_seed(TAG_VAR, mid as u64))?;
        // Tolerate rounding in sin^2 at exactly representable levels.
        if ae.estimate >= target - 1e-12 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
        probes.push(Probe { level: mid, ae });
    }
    let probability = probes
        .iter()
        .find(|p| p.level == lo)
        .map_or(1.0, |p| p.ae.estimate);
    let low_confidence = probes
        .iter()
        .any(|p| p.ae.interval.0 <= target && target <= p.ae.interval.1);
    Ok(VarEstimate {
        alpha,
        index: lo,
        value: dist.value(lo),
        probability,
        bound: ae_error_bound(settings.m),
        low_confidence,
        probes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvarEstimate {
    /// `E[X | X <= l_alpha]` on the index scale, within `[0, l_alpha]`.
    pub index: f64,
    /// Grid value of `index`.
    pub value: f64,
    /// Index-scale error bound.
    pub bound: f64,
    /// `None` on the `l_alpha = 0` fast path.
    pub ae: Option<AEResult>,
}

/// `(VaR + CVaR) / (1 - alpha) * pi / M` on the index scale.
pub fn cvar_error_bound(var_index: f64, cvar_index: f64, alpha: f64, samples: u64) -> Result<f64> {
    if !(alpha < 1.0) {
        return validation(format!("CVaR bound needs alpha < 1, got {alpha}"));
    }
    if samples == 0 {
        return validation("CVaR bound needs M >= 1");
    }
    Ok((var_index + cvar_index) / (1.0 - alpha) * PI / samples as f64)
}

/// `CVaR = l / P[X <= l] * sum_{i <= l} (i / l) p_i` with `l` and
/// `P[X <= l]` taken from `var`.
///
/// The reported bound is [`cvar_error_bound`] with the per-estimate error
/// `pi / M` widened to `(pi / M + approx_error_bound) / c`.
pub fn estimate_cvar(
    dist: &DiscreteDistribution,
    var: &VarEstimate,
    params: &ApproxParams,
    settings: AESettings,
) -> Result<CvarEstimate> {
    let l = var.index;
    if l == 0 {
        return Ok(CvarEstimate {
            index: 0.0,
            value: dist.value(0),
            bound: 0.0,
            ae: None,
        });
    }
    if !(var.probability > 0.0) {
        return validation("estimated P[X <= VaR] is zero; CVaR is undefined");
    }
    let problem = cvar_problem(dist, l, params, settings.m)?;
    let ae = run(problem, settings.with_seed(TAG_CVAR, l as u64))?;
    let tail_mean = unmap(ae.estimate, params.c).clamp(0.0, 1.0);
    let index = (l as f64 * tail_mean / var.probability).clamp(0.0, l as f64);
    let grid = dist.grid();
    let big_m = settings.samples();
    let widen = (1.0 + approx_error_bound(params) * big_m as f64 / PI) / params.c;
    let bound = cvar_error_bound(l as f64, index, var.alpha, big_m)? * widen;
    Ok(CvarEstimate {
        index,
        value: grid.slope * index + grid.offset,
        bound,
        ae: Some(ae),
    })
}

/// All four measures by amplitude estimation.
pub fn quantum_report(
    dist: &DiscreteDistribution,
    f: &BinaryPolynomial,
    alpha: f64,
    params: &ApproxParams,
    settings: AESettings,
) -> Result<RiskReport> {
    let (variance, mean) = estimate_variance(dist, f, params, settings)?;
    let var = estimate_var(dist, alpha, settings)?;
    let cvar = estimate_cvar(dist, &var, params, settings)?;
    let mut r = RiskReport::empty(Method::Quantum, alpha);
    r.expectation = Some(mean.value);
    r.expectation_bound = Some(mean.bound);
    r.variance = Some(variance.value);
    r.variance_bound = Some(variance.bound);
    r.var_index = Some(var.index);
    r.var_value = Some(var.value);
    r.var_loss = Some(-var.value);
    r.var_probability = Some(var.probability);
    r.var_bound = Some(var.bound);
    r.var_low_confidence = Some(var.low_confidence);
    r.cvar_index = Some(cvar.index);
    r.cvar_value = Some(cvar.value);
    r.cvar_bound = Some(cvar.bound);
    r.m = Some(settings.m);
    r.shots = Some(settings.shots);
    r.c = Some(params.c);
    r.u = Some(params.u);
    r.seed = Some(settings.seed);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::AffineGrid;

    fn exact(m: usize) -> AESettings {
        AESettings::new(m, 0, 0)
    }

    #[test]
    fn tbill_expectation() {
        let d = DiscreteDistribution::new(vec![0.7, 0.3], AffineGrid::index()).unwrap();
        let f = BinaryPolynomial::bit(0);
        let est = estimate_expectation(&d, &f, &ApproxParams::new(0.5, 1), exact(6)).unwrap();
        assert!((est.value - 0.3).abs() <= est.bound);
    }

    #[test]
    fn bernoulli_variance() {
        let d = DiscreteDistribution::new(vec![0.5, 0.5], AffineGrid::index()).unwrap();
        let f = BinaryPolynomial::bit(0);
        let (v, _) = estimate_variance(&d, &f, &ApproxParams::new(0.5, 1), exact(6)).unwrap();
        assert!((v.value - 0.25).abs() <= v.bound);
    }

    #[test]
    fn var_of_uniform_and_point_mass() {
        let r = estimate_var(&DiscreteDistribution::uniform(3), 0.5, exact(6)).unwrap();
        assert_eq!(r.index, 3);
        assert!(r.probes.len() <= 3);
        for i0 in [0, 3, 7] {
            let d = DiscreteDistribution::point_mass(3, i0);
            for alpha in [0.05, 0.5, 0.95] {
                assert_eq!(estimate_var(&d, alpha, exact(4)).unwrap().index, i0);
            }
        }
        assert!(estimate_var(&DiscreteDistribution::uniform(2), 1.0, exact(4)).is_err());
    }

    #[test]
    fn cvar_fast_path_and_uniform() {
        let d = DiscreteDistribution::point_mass(2, 0);
        let params = ApproxParams::new(0.8, 2);
        let var = estimate_var(&d, 0.3, exact(5)).unwrap();
        let cvar = estimate_cvar(&d, &var, &params, exact(5)).unwrap();
        assert_eq!(cvar.index, 0.0);
        assert!(cvar.ae.is_none());

        let d = DiscreteDistribution::uniform(2);
        let var = estimate_var(&d, 0.5, exact(6)).unwrap();
        assert_eq!(var.index, 1);
        let cvar = estimate_cvar(&d, &var, &params, exact(6)).unwrap();
        assert!((cvar.index - 0.5).abs() <= cvar.bound);
        assert!(cvar.index >= 0.0 && cvar.index <= 1.0);
    }

    #[test]
    fn cvar_bound_formula() {
        let b = cvar_error_bound(1.0, 0.5, 0.95, 32).unwrap();
        assert!((b - 1.5 / 0.05 * PI / 32.0).abs() < 1e-12);
        assert!((b - 2.945).abs() < 1e-3);
        assert!(cvar_error_bound(1.0, 0.5, 1.0, 32).is_err());
    }

    #[test]
    fn zero_probability_is_an_error() {
        let d = DiscreteDistribution::uniform(2);
        let mut var = estimate_var(&d, 0.5, exact(4)).unwrap();
        var.probability = 0.0;
        assert!(estimate_cvar(&d, &var, &ApproxParams::new(0.8, 1), exact(4)).is_err());
    }
}
