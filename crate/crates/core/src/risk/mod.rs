//! Risk measures by amplitude estimation, with exact and Monte Carlo
//! baselines.
//!
//! Random variables are oriented so that low indices are the adverse tail:
//! `VaR_alpha` is the smallest `l` with `P[X <= l] >= 1 - alpha` and
//! `CVaR_alpha = E[X | X <= l_alpha]`.

mod convergence;
mod estimators;
mod montecarlo;
mod noise_study;
mod oracle;
mod problems;
mod report;

pub use convergence::{
    convergence_study, log_log_slope, median, ConvergenceConfig, ConvergenceRow, ConvergenceTable,
    ScalingRule, StudyProblem,
};
pub use estimators::{
    ae_error_bound, cvar_error_bound, estimate_cvar, estimate_expectation, estimate_var,
    estimate_variance, quantum_report, AESettings, CvarEstimate, Estimate, Probe, VarEstimate,
};
pub use montecarlo::{monte_carlo_baseline, monte_carlo_report, sample_indices, McEstimate, Z_95};
pub use noise_study::{noise_study, noisy_ae_circuit, NoiseCell};
pub use oracle::{classical_oracle, conditional_index_mean, moments, var_index};
pub use problems::{cdf_problem, cvar_problem, expectation_problem, second_moment_problem};
pub use report::{Method, RiskReport, SCHEMA_VERSION};
