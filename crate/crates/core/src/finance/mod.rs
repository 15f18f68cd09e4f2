//! Treasury rate data and the portfolio models built on it.

mod bonds;
mod discretize;
mod pca;
mod rates;
mod two_asset;

pub use bonds::{portfolio_gradient, portfolio_value, tbill_value, PortfolioSpec, TBillValue};
pub use discretize::{discretize, Discretized};
pub use pca::{pca, write_pca_csv, PcaResult};
pub use rates::{daily_differences, load_cmt, parse_cmt, synthetic_cmt, RateSeries, CMT_TENORS};
pub use two_asset::{
    linearize_portfolio, mapped_value, reference_loadings, two_rate_pca, FactorGrid, Linearization,
    TwoAssetConfig, TwoAssetModel,
};

use crate::circuits::{AEProblem, AffineGrid, DiscreteDistribution};
use crate::error::Result;

/// The T-bill as a Bernoulli distribution: index 1 (no rate rise) with
/// probability `p`.
pub fn tbill_distribution(p: f64) -> Result<DiscreteDistribution> {
    DiscreteDistribution::new(vec![1.0 - p, p], AffineGrid::index())
}

/// `A = Ry(2 asin(sqrt(p)))` with its closed-form Grover powers.
pub fn tbill_problem(p: f64, m: usize) -> Result<AEProblem> {
    AEProblem::single_qubit(2.0 * p.sqrt().asin(), m)
}
