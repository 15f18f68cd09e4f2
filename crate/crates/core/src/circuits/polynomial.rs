//! Real polynomials in one variable and over binary variables.

use std::collections::BTreeMap;

/// Coefficients below this magnitude are dropped from binary expansions.
const PRUNE: f64 = 1e-14;

/// `p(x) = sum_j coefficients[j] * x^j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolynomialSpec {
    coefficients: Vec<f64>,
}

impl PolynomialSpec {
    /// Build from ascending coefficients; trailing zeros are dropped so the
    /// declared order always has a nonzero leading coefficient.
    pub fn new(mut coefficients: Vec<f64>) -> PolynomialSpec {
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        PolynomialSpec { coefficients }
    }

    pub fn zero() -> PolynomialSpec {
        PolynomialSpec::default()
    }

    pub fn constant(c: f64) -> PolynomialSpec {
        PolynomialSpec::new(vec![c])
    }

    /// `slope * x + intercept`.
    pub fn linear(slope: f64, intercept: f64) -> PolynomialSpec {
        PolynomialSpec::new(vec![intercept, slope])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, j: usize) -> f64 {
        self.coefficients.get(j).copied().unwrap_or(0.0)
    }

    /// Degree; the zero polynomial has order 0.
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &PolynomialSpec) -> PolynomialSpec {
        let len = self.coefficients.len().max(other.coefficients.len());
        PolynomialSpec::new(
            (0..len)
                .map(|j| self.coefficient(j) + other.coefficient(j))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> PolynomialSpec {
        PolynomialSpec::new(self.coefficients.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &PolynomialSpec) -> PolynomialSpec {
        if self.is_zero() || other.is_zero() {
            return PolynomialSpec::zero();
        }
        let mut out = vec![0.0; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialSpec::new(out)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &PolynomialSpec) -> PolynomialSpec {
        self.coefficients
            .iter()
            .rev()
            .fold(PolynomialSpec::zero(), |acc, &c| {
                acc.mul(inner).add(&PolynomialSpec::constant(c))
            })
    }
}

/// Multilinear polynomial over bits `q_0, q_1, ...`, stored as monomial
/// mask to coefficient. Because `q^2 = q` every power collapses to a set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinaryPolynomial {
    terms: BTreeMap<u64, f64>,
}

impl BinaryPolynomial {
    pub fn zero() -> BinaryPolynomial {
        BinaryPolynomial::default()
    }

    pub fn constant(c: f64) -> BinaryPolynomial {
        let mut p = BinaryPolynomial::zero();
        p.add_term(0, c);
        p
    }

    /// The single bit `q_bit`.
    pub fn bit(bit: usize) -> BinaryPolynomial {
        let mut p = BinaryPolynomial::zero();
        p.add_term(1 << bit, 1.0);
        p
    }

    /// `constant + sum_k weights[k] * q_k`.
    pub fn linear(weights: &[f64], constant: f64) -> BinaryPolynomial {
        let mut p = BinaryPolynomial::constant(constant);
        for (k, &w) in weights.iter().enumerate() {
            p.add_term(1 << k, w);
        }
        p
    }

    /// `poly(x)` with `x = sum_i 2^i q_i` over `n` bits.
    pub fn from_index_polynomial(poly: &PolynomialSpec, n: usize) -> BinaryPolynomial {
        let weights: Vec<f64> = (0..n).map(|i| (1u64 << i) as f64).collect();
        BinaryPolynomial::linear(&weights, 0.0).substitute_into(poly)
    }

    pub fn terms(&self) -> &BTreeMap<u64, f64> {
        &self.terms
    }

    pub fn coefficient(&self, mask: u64) -> f64 {
        self.terms.get(&mask).copied().unwrap_or(0.0)
    }

    fn add_term(&mut self, mask: u64, c: f64) {
        let entry = self.terms.entry(mask).or_insert(0.0);
        *entry += c;
        if entry.abs() <= PRUNE {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> BinaryPolynomial {
        let mut out = BinaryPolynomial::zero();
        for (&m, &c) in &self.terms {
            out.add_term(m, c * s);
        }
        out
    }

    pub fn mul(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = BinaryPolynomial::zero();
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &other.terms {
                out.add_term(m1 | m2, c1 * c2);
            }
        }
        out
    }

    /// `poly(self)`.
    pub fn substitute_into(&self, poly: &PolynomialSpec) -> BinaryPolynomial {
        poly.coefficients()
            .iter()
            .rev()
            .fold(BinaryPolynomial::zero(), |acc, &c| {
                acc.mul(self).add(&BinaryPolynomial::constant(c))
            })
    }

    /// Evaluate on the basis value `x` (bit `k` of `x` is `q_k`).
    pub fn eval(&self, x: u64) -> f64 {
        self.terms
            .iter()
            .filter(|(&m, _)| x & m == m)
            .map(|(_, c)| c)
            .sum()
    }

    /// Highest bit index referenced plus one.
    pub fn num_bits(&self) -> usize {
        self.terms
            .keys()
            .map(|m| 64 - m.leading_zeros() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Largest monomial size.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Minimum and maximum over all inputs on `n` bits.
    pub fn range(&self, n: usize) -> (f64, f64) {
        (0..1u64 << n)
            .map(|x| self.eval(x))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_expansion_over_two_bits() {
        let (a, b, c) = (0.3, -0.7, 0.2);
        let p = PolynomialSpec::new(vec![c, b, a]);
        let bp = BinaryPolynomial::from_index_polynomial(&p, 2);
        assert!((bp.coefficient(0b10) - (4.0 * a + 2.0 * b)).abs() < 1e-15);
        assert!((bp.coefficient(0b11) - 4.0 * a).abs() < 1e-15);
        assert!((bp.coefficient(0b01) - (a + b)).abs() < 1e-15);
        assert!((bp.coefficient(0) - c).abs() < 1e-15);
        for x in 0..4 {
            assert!((bp.eval(x) - p.eval(x as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn compose_identity_and_zero() {
        let f = PolynomialSpec::linear(1.0, 0.0);
        let p = PolynomialSpec::linear(1.0, -0.5);
        assert_eq!(p.compose(&f), PolynomialSpec::linear(1.0, -0.5));
        assert!(PolynomialSpec::zero().compose(&f).is_zero());
    }

    #[test]
    fn order_drops_trailing_zeros() {
        assert_eq!(PolynomialSpec::new(vec![1.0, 2.0, 0.0]).order(), 1);
        assert_eq!(PolynomialSpec::zero().order(), 0);
    }

    #[test]
    fn range_and_degree() {
        let bp = BinaryPolynomial::linear(&[0.5, -0.25], 0.25);
        assert_eq!(bp.range(2), (0.0, 0.75));
        assert_eq!(bp.degree(), 1);
        assert_eq!(bp.num_bits(), 2);
    }
}
