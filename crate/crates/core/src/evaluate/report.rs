//! Export of cross-validation results: R² summary tables (JSON) and
//! per-pixel maps (CSV with voltage headers).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::metrics::{summarize, QUANTILE_CONVENTION, R2_TABLE_LEVELS};
use super::{CVConfig, CVResult};
use crate::axes::Axes;
use crate::dataset::Tissue;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::regress::{DataMode, Method};

/// One row of the R² summary table: tissue x regression x data type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R2Row {
    pub tissue: Tissue,
    pub regression: Method,
    pub data: DataMode,
    pub mean: f64,
    #[serde(with = "crate::serde_nan")]
    pub sd: f64,
    #[serde(rename = "q2.5")]
    pub q2_5: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    #[serde(rename = "q97.5")]
    pub q97_5: f64,
}

/// Column names of the summary table, in order.
pub const R2_COLUMNS: [&str; 7] = ["mean", "sd", "q2.5", "q25", "median", "q75", "q97.5"];

impl R2Row {
    pub fn from_values(tissue: Tissue, regression: Method, data: DataMode, values: &[f64]) -> Result<Self> {
        let defined: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let s = summarize(&defined, &R2_TABLE_LEVELS)?;
        let q = |l| s.quantile(l).expect("requested level");
        Ok(R2Row {
            tissue,
            regression,
            data,
            mean: s.mean,
            sd: s.sd,
            q2_5: q(2.5),
            q25: q(25.0),
            median: q(50.0),
            q75: q(75.0),
            q97_5: q(97.5),
        })
    }

    pub fn values(&self) -> [f64; 7] {
        [
            self.mean,
            self.sd,
            self.q2_5,
            self.q25,
            self.median,
            self.q75,
            self.q97_5,
        ]
    }
}

/// How many R² values went into a summary row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct R2Count {
    pub tissue: Tissue,
    pub regression: Method,
    pub data: DataMode,
    /// Values summarized.
    pub n_models: usize,
    /// Values left out because R² was undefined (constant responses).
    pub n_undefined: usize,
}

impl R2Count {
    pub fn from_values(tissue: Tissue, regression: Method, data: DataMode, values: &[f64]) -> Self {
        let n_models = values.iter().filter(|v| v.is_finite()).count();
        R2Count {
            tissue,
            regression,
            data,
            n_models,
            n_undefined: values.len() - n_models,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R2Summary {
    pub quantile_convention: String,
    /// Training-set R² of every fitted sub-model across folds.
    pub training: Vec<R2Row>,
    /// Held-out R² per pixel and fold, in pA space.
    pub held_out: Vec<R2Row>,
    /// Value counts behind `training`, row for row.
    pub training_counts: Vec<R2Count>,
    /// Value counts behind `held_out`, row for row.
    pub held_out_counts: Vec<R2Count>,
}

impl R2Summary {
    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a CVResult>) -> Result<Self> {
        let mut training = Vec::new();
        let mut held_out = Vec::new();
        let mut training_counts = Vec::new();
        let mut held_out_counts = Vec::new();
        for cv in results {
            let c = &cv.config;
            let train = cv.r_squared_values();
            training.push(R2Row::from_values(cv.tissue.clone(), c.method, c.data_mode, &train)?);
            training_counts.push(R2Count::from_values(cv.tissue.clone(), c.method, c.data_mode, &train));
            let test = cv.test_r_squared_values();
            if test.iter().any(|v| v.is_finite()) {
                held_out.push(R2Row::from_values(cv.tissue.clone(), c.method, c.data_mode, &test)?);
                held_out_counts.push(R2Count::from_values(cv.tissue.clone(), c.method, c.data_mode, &test));
            }
        }
        Ok(R2Summary {
            quantile_convention: QUANTILE_CONVENTION.into(),
            training,
            held_out,
            training_counts,
            held_out_counts,
        })
    }

    /// Plain-text rendering in the usual table layout.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<10} {:<13} {:<5} {}\n",
            "tissue",
            "regression",
            "data",
            R2_COLUMNS.map(|c| format!("{c:>8}")).join(" ")
        );
        for row in &self.training {
            let vals = row.values().map(|v| format!("{v:>8.4}")).join(" ");
            out.push_str(&format!(
                "{:<10} {:<13} {:<5} {vals}\n",
                row.tissue.as_str(),
                row.regression.label(),
                row.data.label()
            ));
        }
        out
    }
}

/// Machine-readable summary of one cross-validation run.
#[derive(Debug, Clone, Serialize)]
pub struct CVSummary<'a> {
    pub config: &'a CVConfig,
    pub denormalization: Option<&'static str>,
    pub tissue: &'a Tissue,
    pub n_samples: usize,
    pub n_predictions: usize,
    pub fold_sizes: Vec<usize>,
    pub training_r_squared: R2Row,
    pub training_r_squared_count: R2Count,
    pub rmse_map: &'a Grid,
}

impl CVResult {
    pub fn summary(&self) -> Result<CVSummary<'_>> {
        Ok(CVSummary {
            config: &self.config,
            denormalization: (self.config.data_mode == DataMode::Normalized)
                .then(|| self.config.denorm_mode.description()),
            tissue: &self.tissue,
            n_samples: self.n_samples,
            n_predictions: self.n_predictions(),
            fold_sizes: self.folds.iter().map(|f| f.test_ids.len()).collect(),
            training_r_squared: R2Row::from_values(
                self.tissue.clone(),
                self.config.method,
                self.config.data_mode,
                &self.r_squared_values(),
            )?,
            training_r_squared_count: R2Count::from_values(
                self.tissue.clone(),
                self.config.method,
                self.config.data_mode,
                &self.r_squared_values(),
            ),
            rmse_map: &self.rmse_map,
        })
    }
}

/// Writes a `sv x cv` map with CV values as the header row and SV values as
/// the first column.
pub fn write_map_csv<W: Write>(grid: &Grid, axes: &Axes, out: W) -> Result<()> {
    if grid.shape() != axes.shape() {
        return Err(Error::validation("map shape does not match axes"));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sv\\cv".to_string()];
    header.extend(axes.cv_values().iter().map(|v| format!("{v:.6}")));
    w.write_record(&header)?;
    for (r, sv) in axes.sv_values().iter().enumerate() {
        let mut rec = vec![format!("{sv:.6}")];
        rec.extend(grid.row(r).iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a map written by [`write_map_csv`], dropping the voltage headers.
pub fn read_map_csv<R: Read>(source: R) -> Result<Grid> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let values = rec
            .iter()
            .skip(1)
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::validation(format!("bad map value '{s}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(values);
    }
    Grid::from_rows(&rows)
}
