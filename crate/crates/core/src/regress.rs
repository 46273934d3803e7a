//! Regression of dispersion-plot responses on `(t_meas, t_fet, h_abs)`.
//!
//! Two model families:
//!
//! * per-pixel linear: each CV/SV cell gets its own
//!   `y = a0 + a1 t_meas + a2 t_fet + a3 h_abs`;
//! * per-row multivariate: each SV row is a response vector
//!   `y_sv = [t_meas t_fet h_abs] B + e`, `e ~ MVN(0, Σ)`, with an optional
//!   leading intercept row in `B`.
//!
//! Every response column of a row shares the same design, so the
//! maximum-likelihood `B` is the column-wise least-squares solution and `Σ`
//! is estimated from the residuals as `EᵀE / (n_train - p)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axes::Axes;
use crate::dataset::{Dataset, DispersionPlot, EnvConditions, Tissue};
use crate::error::{Error, Result};
use crate::evaluate::metrics::r_squared_or_nan;
use crate::grid::Grid;
use crate::linalg;
use crate::normalize::{self, RowStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PerPixelLinear,
    PerRowMultivariate,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::PerPixelLinear, Method::PerRowMultivariate];

    pub fn label(self) -> &'static str {
        match self {
            Method::PerPixelLinear => "linear",
            Method::PerRowMultivariate => "multivariate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataMode {
    Raw,
    Normalized,
}

impl DataMode {
    pub const ALL: [DataMode; 2] = [DataMode::Raw, DataMode::Normalized];

    pub fn label(self) -> &'static str {
        match self {
            DataMode::Raw => "raw",
            DataMode::Normalized => "norm",
        }
    }
}

/// Number of coefficients per response.
pub fn n_coefficients(intercept: bool) -> usize {
    if intercept {
        4
    } else {
        3
    }
}

/// One row per sample: `[1?, t_meas, t_fet, h_abs]`.
pub fn design_matrix(envs: &[EnvConditions], intercept: bool) -> Grid {
    let p = n_coefficients(intercept);
    let mut data = Vec::with_capacity(envs.len() * p);
    for e in envs {
        data.extend(e.regressors(intercept));
    }
    Grid::from_vec(envs.len(), p, data).expect("design dimensions")
}

fn check_sample_count(n: usize, intercept: bool) -> Result<()> {
    let p = n_coefficients(intercept);
    if n <= p {
        return Err(Error::validation(format!(
            "need more than {p} training samples for {p} coefficients (got {n})"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelModel {
    /// `(a0, a1, a2, a3)`; `a0` is 0 for intercept-free fits.
    pub coeffs: [f64; 4],
    pub intercept: bool,
    /// Training R²; NaN when the training responses were constant.
    #[serde(with = "crate::serde_nan")]
    pub r_squared: f64,
    pub n_train: usize,
    pub rank: usize,
}

impl PixelModel {
    fn from_column(column: &[f64], intercept: bool, r_squared: f64, n_train: usize, rank: usize) -> Self {
        let mut coeffs = [0.0; 4];
        if intercept {
            coeffs.copy_from_slice(column);
        } else {
            coeffs[1..].copy_from_slice(column);
        }
        PixelModel {
            coeffs,
            intercept,
            r_squared,
            n_train,
            rank,
        }
    }

    pub fn is_rank_deficient(&self) -> bool {
        self.rank < n_coefficients(self.intercept)
    }
}

pub fn fit_pixel(envs: &[EnvConditions], y: &[f64], intercept: bool) -> Result<PixelModel> {
    if envs.len() != y.len() {
        return Err(Error::validation(format!(
            "{} environment rows but {} responses",
            envs.len(),
            y.len()
        )));
    }
    check_sample_count(y.len(), intercept)?;
    let x = design_matrix(envs, intercept);
    let yg = Grid::from_vec(y.len(), 1, y.to_vec())?;
    let sol = linalg::solve(&x, &yg)?;
    let fitted = linalg::apply(&x, &sol.coefficients);
    let r2 = r_squared_or_nan(y, fitted.as_slice());
    Ok(PixelModel::from_column(
        &sol.coefficients.column(0),
        intercept,
        r2,
        y.len(),
        sol.rank,
    ))
}

pub fn predict_pixel(m: &PixelModel, env: &EnvConditions) -> f64 {
    let [a0, a1, a2, a3] = m.coeffs;
    a0 + a1 * env.t_meas + a2 * env.t_fet + a3 * env.h_abs
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowModel {
    /// `p x n` coefficients; the first row is the intercept when `intercept`.
    pub coefficients: Grid,
    /// `n x n` residual covariance.
    pub sigma: Grid,
    #[serde(with = "crate::serde_nan::vec")]
    pub per_column_r_squared: Vec<f64>,
    pub n_train: usize,
    pub intercept: bool,
    pub rank: usize,
}

impl RowModel {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < n_coefficients(self.intercept)
    }

    /// Coefficients of column `j` in `(a0, a1, a2, a3)` layout.
    pub fn column_coeffs(&self, j: usize) -> [f64; 4] {
        let col = self.coefficients.column(j);
        let mut out = [0.0; 4];
        if self.intercept {
            out.copy_from_slice(&col);
        } else {
            out[1..].copy_from_slice(&col);
        }
        out
    }
}

/// Fits one SV row; `y` is `n_samples x n` (one row per sample).
pub fn fit_row(envs: &[EnvConditions], y: &Grid, intercept: bool) -> Result<RowModel> {
    if envs.len() != y.rows() {
        return Err(Error::validation(format!(
            "{} environment rows but {} response rows",
            envs.len(),
            y.rows()
        )));
    }
    check_sample_count(y.rows(), intercept)?;
    let x = design_matrix(envs, intercept);
    let sol = linalg::solve(&x, y)?;
    let fitted = linalg::apply(&x, &sol.coefficients);
    let residuals = y.sub(&fitted);
    let p = n_coefficients(intercept);
    let sigma = linalg::scaled_gram(&residuals, (y.rows() - p) as f64);
    let per_column_r_squared = (0..y.cols())
        .map(|j| r_squared_or_nan(&y.column(j), &fitted.column(j)))
        .collect();
    Ok(RowModel {
        coefficients: sol.coefficients,
        sigma,
        per_column_r_squared,
        n_train: y.rows(),
        intercept,
        rank: sol.rank,
    })
}

pub fn predict_row(m: &RowModel, env: &EnvConditions) -> Vec<f64> {
    let x = env.regressors(m.intercept);
    (0..m.coefficients.cols())
        .map(|j| x.iter().enumerate().map(|(i, xi)| xi * m.coefficients.get(i, j)).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FitMetadata {
    /// Seconds since the Unix epoch, when stamped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub training_ids: Vec<u64>,
    pub sigma_divisor: String,
    pub rank_deficient_fits: usize,
    /// Per-plot row extremes of the training set (normalized mode only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub training_row_stats: Vec<RowStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitOptions {
    pub method: Method,
    pub data_mode: DataMode,
    pub intercept: bool,
    pub allow_mixed: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            method: Method::PerPixelLinear,
            data_mode: DataMode::Raw,
            intercept: true,
            allow_mixed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotModel {
    pub method: Method,
    pub data_mode: DataMode,
    pub intercept: bool,
    pub axes: Axes,
    pub tissue: Tissue,
    /// Row-major `sv_steps x cv_steps` grid, per-pixel method only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pixel_models: Option<Vec<PixelModel>>,
    /// One per SV row, per-row method only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_models: Option<Vec<RowModel>>,
    /// Training-mean row extremes for de-normalizing without the target plot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_stats: Option<RowStats>,
    pub metadata: FitMetadata,
}

impl PlotModel {
    /// Checks the method/storage pairing and dimensions.
    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = self.axes.shape();
        match (self.method, &self.pixel_models, &self.row_models) {
            (Method::PerPixelLinear, Some(px), None) => {
                if px.len() != rows * cols {
                    return Err(Error::validation(format!(
                        "model has {} pixel models, axes need {}",
                        px.len(),
                        rows * cols
                    )));
                }
                if px.iter().any(|m| m.coeffs.iter().any(|c| !c.is_finite())) {
                    return Err(Error::validation("non-finite pixel coefficients"));
                }
            }
            (Method::PerRowMultivariate, None, Some(rm)) => {
                if rm.len() != rows {
                    return Err(Error::validation(format!(
                        "model has {} row models, axes need {rows}",
                        rm.len()
                    )));
                }
                for m in rm {
                    if m.coefficients.cols() != cols
                        || m.coefficients.rows() != n_coefficients(m.intercept)
                        || !m.coefficients.is_finite()
                    {
                        return Err(Error::validation("malformed row-model coefficients"));
                    }
                }
            }
            _ => {
                return Err(Error::validation(
                    "exactly one of pixel_models / row_models must be present, matching method",
                ))
            }
        }
        if let Some(s) = &self.fallback_stats {
            if s.len() != rows {
                return Err(Error::validation("fallback stats do not match SV rows"));
            }
        }
        Ok(())
    }

    /// Training R² of every sub-model response (one per pixel), row-major.
    pub fn r_squared_values(&self) -> Vec<f64> {
        if let Some(px) = &self.pixel_models {
            px.iter().map(|m| m.r_squared).collect()
        } else if let Some(rm) = &self.row_models {
            rm.iter().flat_map(|m| m.per_column_r_squared.iter().copied()).collect()
        } else {
            Vec::new()
        }
    }

    /// Prediction in the space the model was fitted in (pA or [-1, 1]).
    pub fn predict_model_space(&self, env: &EnvConditions) -> Grid {
        let (rows, cols) = self.axes.shape();
        match (&self.pixel_models, &self.row_models) {
            (Some(px), _) => Grid::from_fn(rows, cols, |r, c| predict_pixel(&px[r * cols + c], env)),
            (None, Some(rm)) => {
                let mut g = Grid::zeros(rows, cols);
                for (r, m) in rm.iter().enumerate() {
                    g.row_mut(r).copy_from_slice(&predict_row(m, env));
                }
                g
            }
            (None, None) => Grid::zeros(rows, cols),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: PlotModel = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }
}

/// Fits a whole-plot model. Plots are row-normalized first in normalized
/// mode, and the per-plot extremes are kept in the metadata.
pub fn fit_plot_model(ds: &Dataset, opts: &FitOptions) -> Result<PlotModel> {
    let tissue = match ds.single_tissue() {
        Some(t) => t.clone(),
        None if ds.is_empty() => return Err(Error::validation("cannot fit a model to an empty dataset")),
        None if opts.allow_mixed => {
            let labels: BTreeSet<&str> = ds.samples().iter().map(|s| s.tissue.as_str()).collect();
            Tissue(labels.into_iter().collect::<Vec<_>>().join("+"))
        }
        None => {
            return Err(Error::validation(
                "dataset mixes tissue types; split it first or allow mixed fitting",
            ))
        }
    };
    check_sample_count(ds.len(), opts.intercept)?;

    let envs = ds.envs();
    let (rows, cols) = ds.axes().shape();
    let mut training_row_stats = Vec::new();
    let grids: Vec<Grid> = match opts.data_mode {
        DataMode::Raw => ds.samples().iter().map(|s| s.plot.responses().clone()).collect(),
        DataMode::Normalized => ds
            .samples()
            .iter()
            .map(|s| {
                let n = normalize::normalize_plot(&s.plot);
                training_row_stats.push(n.stats);
                n.values
            })
            .collect(),
    };
    let row_responses = |r: usize| -> Grid {
        let mut data = Vec::with_capacity(grids.len() * cols);
        for g in &grids {
            data.extend_from_slice(g.row(r));
        }
        Grid::from_vec(grids.len(), cols, data).expect("row response dimensions")
    };

    let (pixel_models, row_models, deficient) = match opts.method {
        Method::PerPixelLinear => {
            let fitted: Vec<Vec<PixelModel>> = (0..rows)
                .into_par_iter()
                .map(|r| {
                    let y = row_responses(r);
                    (0..cols)
                        .map(|c| fit_pixel(&envs, &y.column(c), opts.intercept))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let px: Vec<PixelModel> = fitted.into_iter().flatten().collect();
            let deficient = px.iter().filter(|m| m.is_rank_deficient()).count();
            (Some(px), None, deficient)
        }
        Method::PerRowMultivariate => {
            let rm: Vec<RowModel> = (0..rows)
                .into_par_iter()
                .map(|r| fit_row(&envs, &row_responses(r), opts.intercept))
                .collect::<Result<_>>()?;
            let deficient = rm.iter().filter(|m| m.is_rank_deficient()).count();
            (None, Some(rm), deficient)
        }
    };

    let fallback_stats = match opts.data_mode {
        DataMode::Raw => None,
        DataMode::Normalized => Some(RowStats::mean_of(&training_row_stats)?),
    };
    let model = PlotModel {
        method: opts.method,
        data_mode: opts.data_mode,
        intercept: opts.intercept,
        axes: ds.axes().clone(),
        tissue,
        pixel_models,
        row_models,
        fallback_stats,
        metadata: FitMetadata {
            timestamp: None,
            seed: None,
            training_ids: ds.ids(),
            sigma_divisor: "n_train - p".into(),
            rank_deficient_fits: deficient,
            training_row_stats,
        },
    };
    Ok(model)
}

/// Predicts a full plot in pA.
///
/// For normalized models, `denorm_stats` are the row extremes used to map the
/// prediction back; the measured target plot's extremes reproduce the usual
/// evaluation protocol. Without them the model's training-mean extremes are
/// used, and an error is returned if the model carries none.
pub fn predict_plot(m: &PlotModel, env: &EnvConditions, denorm_stats: Option<&RowStats>) -> Result<DispersionPlot> {
    let grid = m.predict_model_space(env);
    match m.data_mode {
        DataMode::Raw => DispersionPlot::new(grid),
        DataMode::Normalized => {
            let stats = denorm_stats
                .or(m.fallback_stats.as_ref())
                .ok_or_else(|| Error::validation("normalized model needs row stats for de-normalization"))?;
            DispersionPlot::new(normalize::denormalize_grid(&grid, stats)?)
        }
    }
}
