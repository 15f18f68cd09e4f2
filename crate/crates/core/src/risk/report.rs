//! Flat, versioned risk report.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version of the [`RiskReport`] field layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quantum,
    Oracle,
    MonteCarlo,
}

/// Expectation, variance, VaR and CVaR of one distribution under one method.
///
/// `expectation` and `variance` refer to the objective `f(X)`. VaR and CVaR
/// are reported on the index scale and mapped through the distribution's
/// grid; low indices are the adverse tail. Fields a method does not produce
/// are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub schema_version: u32,
    pub method: Method,
    pub alpha: f64,
    pub expectation: Option<f64>,
    pub expectation_bound: Option<f64>,
    pub variance: Option<f64>,
    pub variance_bound: Option<f64>,
    /// `l_alpha`, the smallest index with `P[X <= l] >= 1 - alpha`.
    pub var_index: Option<usize>,
    /// Grid value at `var_index`.
    pub var_value: Option<f64>,
    /// Negated `var_value`, the loss-denominated VaR.
    pub var_loss: Option<f64>,
    /// `P[X <= l_alpha]` as estimated by the method.
    pub var_probability: Option<f64>,
    /// Probability tolerance of each bisection probe.
    pub var_bound: Option<f64>,
    /// Some probe's interval contained `1 - alpha`.
    pub var_low_confidence: Option<bool>,
    /// `E[X | X <= l_alpha]` on the index scale.
    pub cvar_index: Option<f64>,
    /// Grid value of `cvar_index`.
    pub cvar_value: Option<f64>,
    pub cvar_bound: Option<f64>,
    pub m: Option<usize>,
    pub shots: Option<u64>,
    pub c: Option<f64>,
    pub u: Option<usize>,
    pub seed: Option<u64>,
}

impl RiskReport {
    pub fn empty(method: Method, alpha: f64) -> RiskReport {
        RiskReport {
            schema_version: SCHEMA_VERSION,
            method,
            alpha,
            expectation: None,
            expectation_bound: None,
            variance: None,
            variance_bound: None,
            var_index: None,
            var_value: None,
            var_loss: None,
            var_probability: None,
            var_bound: None,
            var_low_confidence: None,
            cvar_index: None,
            cvar_value: None,
            cvar_bound: None,
            m: None,
            shots: None,
            c: None,
            u: None,
            seed: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Write reports as CSV rows with a header line.
    pub fn write_csv<W: Write>(reports: &[RiskReport], w: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        for r in reports {
            writer
                .serialize(r)
                .map_err(|e| Error::Validation(format!("csv: {e}")))?;
        }
        writer.flush().map_err(|source| Error::Io {
            path: "<csv writer>".into(),
            source,
        })?;
        Ok(())
    }
}
