//! Two-bond portfolio driven by the shift and twist of the 1y/2y curve.
//!
//! Rate changes are `(dr1, dr2) = W (S, T)`, with `S` and `T` read from
//! affine grids over their qubit registers. The portfolio value is
//! linearized around the grid midpoint and normalized to `[0, 1]`.

use nalgebra::{DMatrix, Matrix2, Vector2};

use super::bonds::{portfolio_gradient, portfolio_value, PortfolioSpec};
use super::discretize::{discretize, Discretized};
use super::pca::{pca, PcaResult};
use super::rates::{daily_differences, RateSeries};
use crate::circuits::{AffineGrid, BinaryPolynomial, DiscreteDistribution};
use crate::error::{validation, Result};

/// The reference loading matrix, columns shift and twist.
pub fn reference_loadings() -> Matrix2<f64> {
    Matrix2::new(0.703, -0.711, 0.711, 0.703)
}

/// A risk factor on `2^bits` grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorGrid {
    pub grid: AffineGrid,
    pub bits: usize,
}

impl FactorGrid {
    /// `S = 0.0626 x - 0.2188` on 3 qubits.
    pub fn shift() -> FactorGrid {
        FactorGrid {
            grid: AffineGrid::new(0.0626, -0.2188),
            bits: 3,
        }
    }

    /// `T = 0.0250 y - 0.0375` on 2 qubits.
    pub fn twist() -> FactorGrid {
        FactorGrid {
            grid: AffineGrid::new(0.0250, -0.0375),
            bits: 2,
        }
    }

    pub fn points(&self) -> usize {
        1 << self.bits
    }

    pub fn midpoint(&self) -> f64 {
        (self.points() - 1) as f64 / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAssetConfig {
    pub spec: PortfolioSpec,
    /// Maturities in years of the two rates.
    pub tenors: (f64, f64),
    pub shift: FactorGrid,
    pub twist: FactorGrid,
    /// Rate units per factor unit; 0.01 reads scores in percentage points.
    pub score_unit: f64,
    /// Qubits of the value register used for VaR and CVaR.
    pub value_bits: usize,
}

impl Default for TwoAssetConfig {
    fn default() -> TwoAssetConfig {
        TwoAssetConfig {
            spec: PortfolioSpec::reference(),
            tenors: (1.0, 2.0),
            shift: FactorGrid::shift(),
            twist: FactorGrid::twist(),
            score_unit: 0.01,
            value_bits: 5,
        }
    }
}

/// `f~(x, y) = v_mid + gx (x - x_mid) + gy (y - y_mid)` and its normalization
/// `f = n0 + nx x + ny y` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub v_mid: f64,
    pub x_mid: f64,
    pub y_mid: f64,
    pub gx: f64,
    pub gy: f64,
    /// Smallest and largest `f~` over the grid.
    pub f_min: f64,
    pub f_max: f64,
    pub n0: f64,
    pub nx: f64,
    pub ny: f64,
}

impl Linearization {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.v_mid + self.gx * (x - self.x_mid) + self.gy * (y - self.y_mid)
    }

    /// `f~(0, 0)`, the constant term written in `x` and `y`.
    pub fn intercept(&self) -> f64 {
        self.value(0.0, 0.0)
    }

    pub fn normalized(&self, x: f64, y: f64) -> f64 {
        self.n0 + self.nx * x + self.ny * y
    }

    /// Dollar value of a normalized value.
    pub fn denormalize(&self, f: f64) -> f64 {
        self.f_min + f * (self.f_max - self.f_min)
    }
}

/// Exact portfolio value at grid point `(x, y)`.
pub fn mapped_value(
    spec: &PortfolioSpec,
    w: &Matrix2<f64>,
    shift: &FactorGrid,
    twist: &FactorGrid,
    score_unit: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    let st = Vector2::new(
        shift.grid.slope * x + shift.grid.offset,
        twist.grid.slope * y + twist.grid.offset,
    );
    let dr = w * st * score_unit;
    portfolio_value(spec.r1 + dr[0], spec.r2 + dr[1], spec)
}

/// First-order expansion of the mapped value around the grid midpoint,
/// normalized by its extremes over the grid.
pub fn linearize_portfolio(
    spec: &PortfolioSpec,
    w: &Matrix2<f64>,
    shift: &FactorGrid,
    twist: &FactorGrid,
    score_unit: f64,
) -> Result<Linearization> {
    spec.validate()?;
    let (x_mid, y_mid) = (shift.midpoint(), twist.midpoint());
    let v_mid = mapped_value(spec, w, shift, twist, score_unit, x_mid, y_mid)?;
    let st = Vector2::new(
        shift.grid.slope * x_mid + shift.grid.offset,
        twist.grid.slope * y_mid + twist.grid.offset,
    );
    let dr = w * st * score_unit;
    let (g1, g2) = portfolio_gradient(spec.r1 + dr[0], spec.r2 + dr[1], spec)?;
    let gx = (g1 * w[(0, 0)] + g2 * w[(1, 0)]) * score_unit * shift.grid.slope;
    let gy = (g1 * w[(0, 1)] + g2 * w[(1, 1)]) * score_unit * twist.grid.slope;
    let mut lin = Linearization {
        v_mid,
        x_mid,
        y_mid,
        gx,
        gy,
        f_min: 0.0,
        f_max: 0.0,
        n0: 0.0,
        nx: 0.0,
        ny: 0.0,
    };
    let (xm, ym) = ((shift.points() - 1) as f64, (twist.points() - 1) as f64);
    let corners = [
        lin.value(0.0, 0.0),
        lin.value(xm, 0.0),
        lin.value(0.0, ym),
        lin.value(xm, ym),
    ];
    lin.f_min = corners.iter().copied().fold(f64::INFINITY, f64::min);
    lin.f_max = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = lin.f_max - lin.f_min;
    if !(range > 0.0) {
        return validation("linearized value is constant over the grid");
    }
    lin.n0 = (lin.value(0.0, 0.0) - lin.f_min) / range;
    lin.nx = gx / range;
    lin.ny = gy / range;
    Ok(lin)
}

/// The fitted model: factor distributions on the joint register
/// (`x` in the low bits, `y` above), the normalized objective, and the
/// value distribution used for VaR and CVaR.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAssetModel {
    pub config: TwoAssetConfig,
    pub loadings: Matrix2<f64>,
    pub shift: Discretized,
    pub twist: Discretized,
    pub joint: DiscreteDistribution,
    pub linearization: Linearization,
    /// Normalized value over the joint register bits.
    pub objective: BinaryPolynomial,
    /// Linearized value at zero shift and twist.
    pub today: f64,
    /// Normalized value binned onto `2^value_bits` points; the grid is the
    /// profit and loss in dollars relative to `today`.
    pub values: DiscreteDistribution,
}

/// PCA of the two rate columns and the daily differences it was fitted on.
pub fn two_rate_pca(series: &RateSeries, tenors: (f64, f64)) -> Result<PcaResult> {
    let pair = series.select(&[tenors.0, tenors.1])?;
    pca(&daily_differences(&pair)?)
}

impl TwoAssetModel {
    /// Fit loadings and factor distributions to a rate series.
    pub fn fit(series: &RateSeries, config: TwoAssetConfig) -> Result<TwoAssetModel> {
        let p = two_rate_pca(series, config.tenors)?;
        let c = &p.components;
        let loadings = Matrix2::new(c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]);
        let column = |k: usize| -> Vec<f64> { p.scores.column(k).iter().copied().collect() };
        let shift = discretize(&column(0), config.shift.bits, config.shift.grid)?;
        let twist = discretize(&column(1), config.twist.bits, config.twist.grid)?;
        TwoAssetModel::from_parts(config, loadings, shift, twist)
    }

    /// Assemble from given loadings and factor distributions.
    pub fn from_parts(
        config: TwoAssetConfig,
        loadings: Matrix2<f64>,
        shift: Discretized,
        twist: Discretized,
    ) -> Result<TwoAssetModel> {
        if shift.dist.num_qubits() != config.shift.bits
            || twist.dist.num_qubits() != config.twist.bits
        {
            return validation("factor distributions do not match the configured grids");
        }
        if config.value_bits == 0 || config.value_bits > 12 {
            return validation(format!("value register of {} qubits", config.value_bits));
        }
        let lin = linearize_portfolio(
            &config.spec,
            &loadings,
            &config.shift,
            &config.twist,
            config.score_unit,
        )?;
        let joint = DiscreteDistribution::product(&shift.dist, &twist.dist);
        let bx = config.shift.bits;
        let mut weights: Vec<f64> = (0..bx).map(|k| lin.nx * (1u64 << k) as f64).collect();
        weights.extend((0..config.twist.bits).map(|k| lin.ny * (1u64 << k) as f64));
        let objective = BinaryPolynomial::linear(&weights, lin.n0);

        let x0 = -config.shift.grid.offset / config.shift.grid.slope;
        let y0 = -config.twist.grid.offset / config.twist.grid.slope;
        let today = lin.value(x0, y0);
        let bins = 1usize << config.value_bits;
        let top = (bins - 1) as f64;
        let mut probs = vec![0.0; bins];
        for (i, &p) in joint.probs().iter().enumerate() {
            let f = objective.eval(i as u64).clamp(0.0, 1.0);
            probs[(f * top).round() as usize] += p;
        }
        let range = lin.f_max - lin.f_min;
        let grid = AffineGrid::new(range / top, lin.f_min - today);
        let values = DiscreteDistribution::new(probs, grid)?;
        Ok(TwoAssetModel {
            config,
            loadings,
            shift,
            twist,
            joint,
            linearization: lin,
            objective,
            today,
            values,
        })
    }

    /// Normalized value of value-register index `k`.
    pub fn normalized_level(&self, k: f64) -> f64 {
        k / ((1usize << self.config.value_bits) - 1) as f64
    }

    /// Loadings as a dense matrix, tenor by component.
    pub fn loadings_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_iterator(2, 2, self.loadings.iter().copied())
    }
}
