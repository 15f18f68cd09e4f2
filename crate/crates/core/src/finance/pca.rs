//! Principal components of rate differences.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{validation, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    /// Orthonormal columns, tenor by component. Each column's last entry
    /// is non-negative.
    pub components: DMatrix<f64>,
    /// Descending, non-negative.
    pub eigenvalues: DVector<f64>,
    /// Cumulative explained-variance fractions.
    pub explained: Vec<f64>,
    pub mean: DVector<f64>,
    /// Centered observations projected onto the components.
    pub scores: DMatrix<f64>,
}

/// Eigendecomposition of the sample covariance of `data` (rows are
/// observations).
pub fn pca(data: &DMatrix<f64>) -> Result<PcaResult> {
    let (rows, cols) = data.shape();
    if rows < 2 || cols == 0 {
        return validation(format!(
            "PCA needs at least 2 rows and 1 column, got {rows}x{cols}"
        ));
    }
    let mean = DVector::from_iterator(cols, data.column_iter().map(|c| c.mean()));
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let cov = centered.transpose() * &centered / (rows - 1) as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut components = DMatrix::zeros(cols, cols);
    let mut eigenvalues = DVector::zeros(cols);
    for (k, &j) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(j).into_owned();
        if v[cols - 1] < 0.0 || (v[cols - 1] == 0.0 && v.iter().sum::<f64>() < 0.0) {
            v = -v;
        }
        components.set_column(k, &v);
        eigenvalues[k] = eig.eigenvalues[j].max(0.0);
    }
    let total: f64 = eigenvalues.sum();
    let mut acc = 0.0;
    let explained = eigenvalues
        .iter()
        .map(|&l| {
            acc += l;
            if total > 0.0 {
                acc / total
            } else {
                0.0
            }
        })
        .collect();
    let scores = &centered * &components;
    Ok(PcaResult {
        components,
        eigenvalues,
        explained,
        mean,
        scores,
    })
}

/// CSV with one row per component: eigenvalue, cumulative explained
/// variance, and the loading on each tenor.
pub fn write_pca_csv<W: Write>(result: &PcaResult, tenors: &[f64], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![
        "component".to_string(),
        "eigenvalue".into(),
        "cumulative_explained".into(),
    ];
    header.extend(tenors.iter().map(|t| format!("loading_{t}")));
    let csv_err = |e: csv::Error| Error::Validation(format!("csv: {e}"));
    out.write_record(&header).map_err(csv_err)?;
    for k in 0..result.eigenvalues.len() {
        let mut row = vec![
            k.to_string(),
            result.eigenvalues[k].to_string(),
            result.explained[k].to_string(),
        ];
        row.extend(result.components.column(k).iter().map(|v| v.to_string()));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(|source| Error::Io {
        path: "<pca csv>".into(),
        source,
    })
}
