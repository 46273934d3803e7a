//! K-fold cross-validation of plot models, R² and RMSE maps.

pub mod folds;
pub mod metrics;
pub mod report;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Tissue};
use crate::diagnostics::mean_sd_maps;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::normalize::{self, RowStats};
use crate::regress::{self, DataMode, FitOptions, Method};

pub use folds::kfold_split;
pub use metrics::{r_squared, rmse, summarize, SummaryStats};

/// Where de-normalization extremes come from when predicting held-out plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenormMode {
    /// Extremes of the measured target row. Uses the held-out measurement
    /// itself; selected on the command line as `paper`.
    MeasuredTarget,
    /// Mean extremes of the training plots; no target information.
    TrainMean,
}

impl DenormMode {
    pub fn label(self) -> &'static str {
        match self {
            DenormMode::MeasuredTarget => "paper",
            DenormMode::TrainMean => "train-mean",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DenormMode::MeasuredTarget => "measured target row min/max (uses held-out data)",
            DenormMode::TrainMean => "training-set mean row min/max (no held-out data)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVConfig {
    pub k: usize,
    pub seed: u64,
    pub method: Method,
    pub data_mode: DataMode,
    pub intercept: bool,
    pub denorm_mode: DenormMode,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for CVConfig {
    fn default() -> Self {
        CVConfig {
            k: 10,
            seed: 0,
            method: Method::PerPixelLinear,
            data_mode: DataMode::Raw,
            intercept: true,
            denorm_mode: DenormMode::MeasuredTarget,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub fold: usize,
    pub train_size: usize,
    pub test_ids: Vec<u64>,
    /// Prediction minus measurement (pA), one grid per test sample in `test_ids` order.
    pub errors: Vec<Grid>,
    /// Training R² of every pixel response of this fold's model.
    pub train_r_squared: Vec<f64>,
    /// Held-out R² per pixel (pA space); NaN where undefined.
    pub test_r_squared: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CVResult {
    pub config: CVConfig,
    pub tissue: Tissue,
    pub n_samples: usize,
    pub rmse_map: Grid,
    pub folds: Vec<FoldOutcome>,
}

impl CVResult {
    /// Training R² of every sub-model across all folds.
    pub fn r_squared_values(&self) -> Vec<f64> {
        self.folds
            .iter()
            .flat_map(|f| f.train_r_squared.iter().copied())
            .collect()
    }

    pub fn test_r_squared_values(&self) -> Vec<f64> {
        self.folds
            .iter()
            .flat_map(|f| f.test_r_squared.iter().copied())
            .collect()
    }

    pub fn test_ids(&self) -> Vec<u64> {
        self.folds.iter().flat_map(|f| f.test_ids.iter().copied()).collect()
    }

    /// Number of held-out predictions evaluated.
    pub fn n_predictions(&self) -> usize {
        self.folds.iter().map(|f| f.errors.len()).sum()
    }

    /// Errors of all folds at one pixel, in fold order.
    pub fn pixel_errors(&self, sv: usize, cv: usize) -> Vec<f64> {
        self.folds
            .iter()
            .flat_map(|f| f.errors.iter().map(move |g| g.get(sv, cv)))
            .collect()
    }
}

fn run_fold(ds: &Dataset, cfg: &CVConfig, fold: usize, test: &[u64]) -> Result<FoldOutcome> {
    let test_set: HashSet<u64> = test.iter().copied().collect();
    let train = ds.filter(|s| !test_set.contains(&s.id));
    let test_ds = ds.subset(&test_set);
    let opts = FitOptions {
        method: cfg.method,
        data_mode: cfg.data_mode,
        intercept: cfg.intercept,
        allow_mixed: false,
    };
    let model = regress::fit_plot_model(&train, &opts)?;

    let mut errors = Vec::with_capacity(test_ds.len());
    let mut predictions = Vec::with_capacity(test_ds.len());
    for s in test_ds.samples() {
        let measured_stats;
        let stats: Option<&RowStats> = match (cfg.data_mode, cfg.denorm_mode) {
            (DataMode::Normalized, DenormMode::MeasuredTarget) => {
                measured_stats = normalize::RowStats::of(s.plot.responses());
                Some(&measured_stats)
            }
            _ => None,
        };
        let pred = regress::predict_plot(&model, &s.env, stats)?;
        errors.push(pred.responses().sub(s.plot.responses()));
        predictions.push(pred);
    }

    let (rows, cols) = ds.axes().shape();
    let mut test_r_squared = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let y: Vec<f64> = test_ds.samples().iter().map(|s| s.plot.get(r, c)).collect();
            let y_hat: Vec<f64> = predictions.iter().map(|p| p.get(r, c)).collect();
            test_r_squared.push(metrics::r_squared_or_nan(&y, &y_hat));
        }
    }

    Ok(FoldOutcome {
        fold,
        train_size: train.len(),
        test_ids: test_ds.ids(),
        errors,
        train_r_squared: model.r_squared_values(),
        test_r_squared,
    })
}

/// Fits on `k - 1` folds and predicts the held-out fold, `k` times.
///
/// Folds are independent and may run in parallel; the RMSE map is reduced in
/// fold order afterwards, so the result is identical for any worker count.
pub fn cross_validate(ds: &Dataset, cfg: &CVConfig) -> Result<CVResult> {
    let tissue = ds
        .single_tissue()
        .cloned()
        .ok_or_else(|| Error::validation("cross-validation needs a non-empty single-tissue dataset"))?;
    let folds = kfold_split(&ds.ids(), cfg.k, cfg.seed)?;

    let run_all = || -> Result<Vec<FoldOutcome>> {
        folds
            .par_iter()
            .enumerate()
            .map(|(i, test)| {
                run_fold(ds, cfg, i, test).map_err(|e| Error::Fold {
                    fold: i,
                    source: Box::new(e),
                })
            })
            .collect()
    };
    let outcomes = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };

    let (rows, cols) = ds.axes().shape();
    let mut sum_sq = Grid::zeros(rows, cols);
    let mut count = 0usize;
    for f in &outcomes {
        for e in &f.errors {
            for r in 0..rows {
                for c in 0..cols {
                    let v = e.get(r, c);
                    sum_sq.set(r, c, sum_sq.get(r, c) + v * v);
                }
            }
            count += 1;
        }
    }
    let rmse_map = sum_sq.map(|s| (s / count as f64).sqrt());

    Ok(CVResult {
        config: *cfg,
        tissue,
        n_samples: ds.len(),
        rmse_map,
        folds: outcomes,
    })
}

/// Per-pixel dataset SD minus cross-validated RMSE. Positive where the model
/// beats predicting the mean.
pub fn rmse_vs_sd_map(ds: &Dataset, cv: &CVResult) -> Result<Grid> {
    if cv.n_samples != ds.len() || cv.rmse_map.shape() != ds.axes().shape() {
        return Err(Error::validation(
            "cross-validation result does not belong to this dataset",
        ));
    }
    let maps = mean_sd_maps(ds)?;
    Ok(maps.sd.sub(&cv.rmse_map))
}
