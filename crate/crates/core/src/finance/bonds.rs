//! Bond values: the one-period T-bill and the two-bond portfolio.

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

/// T-bill value under a rate rise of `delta_r` with probability `1 - p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TBillValue {
    pub value: f64,
    /// `V_F / (1 + r + delta_r)`.
    pub low: f64,
    /// `V_F / (1 + r)`.
    pub high: f64,
    /// `value` mapped affinely with `low -> 0` and `high -> 1`.
    pub mapped: f64,
}

/// `V = (1 - p) V_F / (1 + r + delta_r) + p V_F / (1 + r)`.
pub fn tbill_value(p: f64, r: f64, delta_r: f64, face: f64) -> Result<TBillValue> {
    if !(0.0..=1.0).contains(&p) {
        return validation(format!("probability {p} outside [0, 1]"));
    }
    if !(1.0 + r > 0.0 && 1.0 + r + delta_r > 0.0) {
        return validation("discount denominators must be positive");
    }
    let low = face / (1.0 + r + delta_r);
    let high = face / (1.0 + r);
    let value = (1.0 - p) * low + p * high;
    let mapped = if high != low {
        (value - low) / (high - low)
    } else {
        p
    };
    Ok(TBillValue {
        value,
        low,
        high,
        mapped,
    })
}

/// A one-year zero-coupon bond plus a two-year bond paying semi-annual
/// coupons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSpec {
    pub face1: f64,
    pub face2: f64,
    /// Today's one-year yield, as a fraction.
    pub r1: f64,
    /// Today's two-year yield, as a fraction.
    pub r2: f64,
    /// Coupon per period, as a fraction of `face2`.
    pub coupon: f64,
    pub alpha: f64,
}

impl PortfolioSpec {
    /// $100 faces, yields 1.8% and 2.25%, coupon 2.5%, 95% VaR.
    pub fn reference() -> PortfolioSpec {
        PortfolioSpec {
            face1: 100.0,
            face2: 100.0,
            r1: 0.018,
            r2: 0.0225,
            coupon: 0.025,
            alpha: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.face1 > 0.0 && self.face2 > 0.0) {
            return validation("face values must be positive");
        }
        if !(self.r1 > -1.0 && self.r2 > -1.0) {
            return validation("rates must exceed -1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return validation(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        Ok(())
    }
}

/// `V = F1 / (1 + r1) + sum_{i=1..4} c F2 / (1 + r2/2)^i + F2 / (1 + r2/2)^4`.
pub fn portfolio_value(r1: f64, r2: f64, spec: &PortfolioSpec) -> Result<f64> {
    let d1 = 1.0 + r1;
    let d2 = 1.0 + r2 / 2.0;
    if !(d1 > 0.0 && d2 > 0.0) {
        return validation("discount denominators must be positive");
    }
    let coupons: f64 = (1..=4).map(|i| spec.coupon * spec.face2 / d2.powi(i)).sum();
    Ok(spec.face1 / d1 + coupons + spec.face2 / d2.powi(4))
}

/// `(dV/dr1, dV/dr2)`.
pub fn portfolio_gradient(r1: f64, r2: f64, spec: &PortfolioSpec) -> Result<(f64, f64)> {
    let d1 = 1.0 + r1;
    let d2 = 1.0 + r2 / 2.0;
    if !(d1 > 0.0 && d2 > 0.0) {
        return validation("discount denominators must be positive");
    }
    let g1 = -spec.face1 / (d1 * d1);
    let coupons: f64 = (1..=4)
        .map(|i| -(i as f64) / 2.0 * spec.coupon * spec.face2 / d2.powi(i + 1))
        .sum();
    let g2 = coupons - 2.0 * spec.face2 / d2.powi(5);
    Ok((g1, g2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tbill_branches() {
        let v = tbill_value(0.3, 0.0, 0.0025, 100.0).unwrap();
        assert!((v.mapped - 0.3).abs() < 1e-12);
        assert_eq!(
            tbill_value(1.0, 0.01, 0.0025, 100.0).unwrap().value,
            100.0 / 1.01
        );
        assert_eq!(
            tbill_value(0.0, 0.01, 0.0025, 100.0).unwrap().value,
            100.0 / 1.0125
        );
        assert!(tbill_value(0.5, -1.0, 0.0, 100.0).is_err());
    }

    #[test]
    fn zero_rate_limit() {
        let spec = PortfolioSpec::reference();
        let v = portfolio_value(0.0, 0.0, &spec).unwrap();
        assert!((v - (100.0 + 4.0 * 2.5 + 100.0)).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_differences() {
        let spec = PortfolioSpec::reference();
        let (g1, g2) = portfolio_gradient(0.02, 0.03, &spec).unwrap();
        let h = 1e-6;
        let n1 = (portfolio_value(0.02 + h, 0.03, &spec).unwrap()
            - portfolio_value(0.02 - h, 0.03, &spec).unwrap())
            / (2.0 * h);
        let n2 = (portfolio_value(0.02, 0.03 + h, &spec).unwrap()
            - portfolio_value(0.02, 0.03 - h, &spec).unwrap())
            / (2.0 * h);
        assert!((g1 - n1).abs() < 1e-5);
        assert!((g2 - n2).abs() < 1e-5);
    }
}
