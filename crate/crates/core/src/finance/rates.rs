//! Constant-maturity Treasury rate series.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{validation, Error, Result};

/// Maturities in years of the published CMT curve.
pub const CMT_TENORS: [f64; 10] = [0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 20.0, 30.0];

/// Daily rates in percent per annum; every row is complete and dates are
/// strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    pub dates: Vec<NaiveDate>,
    pub tenors: Vec<f64>,
    /// Row per date, column per tenor.
    pub rates: DMatrix<f64>,
}

impl RateSeries {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Column index of `tenor`.
    pub fn tenor_index(&self, tenor: f64) -> Result<usize> {
        self.tenors
            .iter()
            .position(|&t| (t - tenor).abs() < 1e-9)
            .ok_or_else(|| Error::Validation(format!("tenor {tenor} not in series")))
    }

    /// The series restricted to the given tenors, in that order.
    pub fn select(&self, tenors: &[f64]) -> Result<RateSeries> {
        let cols = tenors
            .iter()
            .map(|&t| self.tenor_index(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(RateSeries {
            dates: self.dates.clone(),
            tenors: tenors.to_vec(),
            rates: self.rates.select_columns(&cols),
        })
    }
}

fn parse_error(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse CMT CSV text with header `date,<tenor>,...`. Rows with any blank
/// rate are dropped.
pub fn parse_cmt<R: Read>(reader: R) -> Result<RateSeries> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = csv.records();
    let header = match records.next() {
        None => {
            return Ok(RateSeries {
                dates: Vec::new(),
                tenors: CMT_TENORS.to_vec(),
                rates: DMatrix::zeros(0, CMT_TENORS.len()),
            })
        }
        Some(r) => r.map_err(|e| parse_error(1, e.to_string()))?,
    };
    if header.get(0).map(str::to_ascii_lowercase).as_deref() != Some("date") || header.len() < 2 {
        return Err(parse_error(
            1,
            "header must start with `date` followed by tenors",
        ));
    }
    let tenors = header
        .iter()
        .skip(1)
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| parse_error(1, format!("tenor `{t}` is not a number")))
        })
        .collect::<Result<Vec<_>>>()?;
    if tenors.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parse_error(1, "tenors must be strictly increasing"));
    }
    let mut dates = Vec::new();
    let mut values = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != tenors.len() + 1 {
            return Err(parse_error(
                line,
                format!(
                    "expected {} fields, found {}",
                    tenors.len() + 1,
                    record.len()
                ),
            ));
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
            .map_err(|_| parse_error(line, format!("`{}` is not an ISO date", &record[0])))?;
        if record.iter().skip(1).any(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| parse_error(line, format!("rate `{v}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(&last) = dates.last() {
            if date <= last {
                return Err(parse_error(
                    line,
                    format!("date {date} does not follow {last}"),
                ));
            }
        }
        dates.push(date);
        values.extend(row);
    }
    let rates = DMatrix::from_row_slice(dates.len(), tenors.len(), &values);
    Ok(RateSeries {
        dates,
        tenors,
        rates,
    })
}

/// Read a CMT CSV file; see [`parse_cmt`].
pub fn load_cmt(path: &Path) -> Result<RateSeries> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_cmt(file)
}

/// `rates[t + 1] - rates[t]`, treating each gap between rows as one step.
pub fn daily_differences(series: &RateSeries) -> Result<DMatrix<f64>> {
    let rows = series.len();
    if rows < 2 {
        return validation(format!("need at least 2 rows for differences, got {rows}"));
    }
    let r = &series.rates;
    Ok(r.rows(1, rows - 1) - r.rows(0, rows - 1))
}

/// Factor loadings of the synthetic curve moves, one per tenor.
fn synthetic_loadings(tenor: f64) -> (f64, f64, f64) {
    let shift = 0.8 + 0.2 * tenor.min(5.0) / 5.0;
    let z = (tenor.ln() - 2f64.ln()) / 30f64.ln();
    let twist = z;
    let butterfly = z * z - 0.15;
    (shift, twist, butterfly)
}

/// Deterministic business-day CMT series driven by shift, twist and
/// butterfly factors plus independent per-tenor noise (all in percent):
/// daily standard deviations 0.06, 0.025, 0.012 and 0.006.
pub fn synthetic_cmt(days: usize, seed: u64) -> RateSeries {
    const SIGMA: [f64; 4] = [0.06, 0.025, 0.012, 0.006];
    const START: [f64; 10] = [1.5, 1.6, 1.8, 2.0, 2.1, 2.3, 2.45, 2.6, 2.85, 3.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let loadings: Vec<(f64, f64, f64)> =
        CMT_TENORS.iter().map(|&t| synthetic_loadings(t)).collect();
    let mut dates = Vec::with_capacity(days);
    let mut values = Vec::with_capacity(days * CMT_TENORS.len());
    let mut date = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    let mut level = START.to_vec();
    for day in 0..days {
        if day > 0 {
            let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
            let (s, t, b) = (
                SIGMA[0] * normal(),
                SIGMA[1] * normal(),
                SIGMA[2] * normal(),
            );
            for (k, &(ls, lt, lb)) in loadings.iter().enumerate() {
                level[k] += s * ls + t * lt + b * lb + SIGMA[3] * normal();
            }
            date += Duration::days(1);
            while matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
                date += Duration::days(1);
            }
        }
        dates.push(date);
        values.extend_from_slice(&level);
    }
    RateSeries {
        rates: DMatrix::from_row_slice(days, CMT_TENORS.len(), &values),
        dates,
        tenors: CMT_TENORS.to_vec(),
    }
}
