//! Taylor encoding of a `[0, 1]` objective into a rotation angle.
//!
//! The objective qubit is rotated so that its `|1>` probability is
//! `sin^2(c * p_u(y) + pi/4)`, where `p_u` is the order `2u + 1` Taylor
//! polynomial of `(asin(sqrt(c (y - 1/2) + 1/2)) - pi/4) / c` around `y = 1/2`.
//! This approximates `c (y - 1/2) + 1/2`, and the scaling `c` trades
//! approximation bias against amplitude-estimation resolution.

use std::f64::consts::SQRT_2;

use crate::circuits::PolynomialSpec;
use crate::error::{validation, Result};

/// The two knobs of the encoding plus the order of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxParams {
    /// Scaling in `(0, 1]`.
    pub c: f64,
    /// The Taylor order is `2u + 1`.
    pub u: usize,
    /// Order of the objective polynomial.
    pub s: usize,
}

impl ApproxParams {
    pub fn new(c: f64, u: usize) -> ApproxParams {
        ApproxParams { c, u, s: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c <= 1.0) {
            return validation(format!("scaling c must lie in (0, 1], got {}", self.c));
        }
        if self.s == 0 {
            return validation("objective order s must be at least 1");
        }
        Ok(())
    }
}

/// Series coefficient of `z^(2v+1)` in `asin(sqrt(z + 1/2)) - pi/4`,
/// equal to `binom(2v, v) / (2v + 1)`.
pub fn taylor_coefficient(v: usize) -> f64 {
    let mut binom = 1.0;
    for i in 0..v {
        binom = binom * (2 * v - i) as f64 / (i + 1) as f64;
    }
    binom / (2 * v + 1) as f64
}

/// `p_u(y) = (1/c) sum_{v <= u} a_v (c (y - 1/2))^(2v + 1)` as a polynomial in `y`.
pub fn taylor_polynomial(params: &ApproxParams) -> PolynomialSpec {
    let c = params.c;
    let mut in_z = vec![0.0; 2 * params.u + 2];
    for v in 0..=params.u {
        in_z[2 * v + 1] = taylor_coefficient(v) * c.powi(2 * v as i32);
    }
    PolynomialSpec::new(in_z).compose(&PolynomialSpec::linear(1.0, -0.5))
}

/// Leading-order worst-case error `c^(2u+3) / ((2u+3) 2^(u+1))` of the encoding.
pub fn approx_error_bound(params: &ApproxParams) -> f64 {
    let k = 2 * params.u + 3;
    params.c.powi(k as i32) / (k as f64 * 2f64.powi(params.u as i32 + 1))
}

/// A scaling choice and whether it hit the upper limit 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub c: f64,
    pub clamped: bool,
}

/// `c* = sqrt(2) eps^(1/(2u+2))`, the scaling that maximizes
/// `c eps - approx_error_bound(c, u)`, clamped to `(0, 1]`.
pub fn optimal_scaling(eps: f64, u: usize) -> Result<Scaling> {
    if !(eps > 0.0) {
        return validation(format!("target error must be positive, got {eps}"));
    }
    let c = SQRT_2 * eps.powf(1.0 / (2 * u + 2) as f64);
    Ok(if c >= 1.0 {
        Scaling {
            c: 1.0,
            clamped: c > 1.0,
        }
    } else {
        Scaling { c, clamped: false }
    })
}

/// Smallest error `eps` reachable with `M` samples, from
/// `max_c (c eps - approx_error_bound(c, u)) = pi / M`.
pub fn achievable_error(samples: u64, u: usize) -> f64 {
    let k = (2 * u + 3) as f64;
    let base = std::f64::consts::PI / (samples as f64 * SQRT_2 * (1.0 - 1.0 / k));
    base.powf((2 * u + 2) as f64 / k)
}

/// The optimal scaling for an evaluation register of `M` samples.
pub fn scaling_for_samples(samples: u64, u: usize) -> Scaling {
    optimal_scaling(achievable_error(samples, u), u).expect("positive error")
}

/// Exponent `(2u + 2) / (2u + 3)` of the error decay `O(M^-exponent)`.
pub fn convergence_rate(u: usize) -> f64 {
    (2 * u + 2) as f64 / (2 * u + 3) as f64
}

/// `p(f(x))`.
pub fn compose(f: &PolynomialSpec, p: &PolynomialSpec) -> PolynomialSpec {
    p.compose(f)
}

/// `|1>` probability produced by the encoding at objective value `y`.
pub fn encoded_probability(params: &ApproxParams, y: f64) -> f64 {
    let p = taylor_polynomial(params);
    (params.c * p.eval(y) + std::f64::consts::FRAC_PI_4)
        .sin()
        .powi(2)
}

/// Inverse of the affine map `y -> c (y - 1/2) + 1/2`.
pub fn unmap(a: f64, c: f64) -> f64 {
    (a - 0.5) / c + 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients() {
        assert_eq!(taylor_coefficient(0), 1.0);
        assert!((taylor_coefficient(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((taylor_coefficient(2) - 6.0 / 5.0).abs() < 1e-15);
        assert!((taylor_coefficient(3) - 20.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn first_order_is_centered_identity() {
        for &c in &[0.1, 0.7, 1.0] {
            let p = taylor_polynomial(&ApproxParams::new(c, 0));
            assert_eq!(p.order(), 1);
            assert!((p.coefficient(1) - 1.0).abs() < 1e-15);
            assert!((p.coefficient(0) + 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_around_midpoint() {
        for u in 0..4 {
            let p = taylor_polynomial(&ApproxParams::new(0.6, u));
            assert!(p.eval(0.5).abs() < 1e-15);
            assert!((p.eval(0.8) + p.eval(0.2)).abs() < 1e-14);
        }
    }

    #[test]
    fn bound_values() {
        assert!((approx_error_bound(&ApproxParams::new(1.0, 0)) - 1.0 / 6.0).abs() < 1e-15);
        assert!(
            (approx_error_bound(&ApproxParams::new(0.25, 0)) - 0.25f64.powi(3) / 6.0).abs() < 1e-15
        );
    }

    #[test]
    fn scaling() {
        let s = optimal_scaling(0.01, 0).unwrap();
        assert!((s.c - SQRT_2 * 0.1).abs() < 1e-15 && !s.clamped);
        let s = optimal_scaling(0.5, 0).unwrap();
        assert!((s.c - 1.0).abs() < 1e-15);
        assert!(optimal_scaling(4.0, 0).unwrap().clamped);
        assert!(optimal_scaling(0.0, 0).is_err());
    }

    #[test]
    fn achievable_error_meets_resolution() {
        for u in 0..3 {
            for m in 2..8 {
                let samples = 1u64 << m;
                let eps = achievable_error(samples, u);
                let c = SQRT_2 * eps.powf(1.0 / (2 * u + 2) as f64);
                let lhs = c * eps - approx_error_bound(&ApproxParams::new(c, u));
                assert!((lhs - std::f64::consts::PI / samples as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rates() {
        assert!((convergence_rate(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((convergence_rate(1) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn unmap_inverts_map() {
        let (c, e) = (0.3, 0.42);
        assert!((unmap(c * (e - 0.5) + 0.5, c) - e).abs() < 1e-12);
    }
}
