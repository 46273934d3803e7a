//! Temperature and humidity regression for differential mobility
//! spectrometry (DMS) dispersion plots.
//!
//! A dispersion plot is a grid of positive-ion currents (pA) over separation
//! voltage (SV, rows) and compensation voltage (CV, columns). The crate models
//! how those currents move with sample temperature, the internal FET sensor
//! temperature and absolute humidity, and predicts plots for given
//! conditions:
//!
//! - [`axes`], [`dataset`], [`ingest`]: voltage grids, samples, file I/O
//! - [`normalize`]: SV-row-wise scaling to [-1, 1] and its inverse
//! - [`regress`]: per-pixel linear and per-row multivariate models
//! - [`evaluate`]: k-fold cross-validation, R², RMSE maps, summary tables
//! - [`diagnostics`]: env statistics, correlations, ECDF bands, trend slopes
//! - [`synth`]: synthetic plots with known ground truth
//! - [`cli`]: the `dms-drift` command-line front end
//!
//! ```
//! use dms_drift::prelude::*;
//!
//! let mut spec = SynthSpec::new(AxesDef::default(), 60, 7);
//! spec.linear_term = Some(random_linear_term(&Axes::default(), 1.0, 7));
//! spec.noise_sd = 1.0;
//! let (ds, _) = generate_dataset(&spec)?;
//!
//! let model = fit_plot_model(&ds, &FitOptions::default())?;
//! let plot = predict_plot(&model, &ds.samples()[0].env, None)?;
//! assert_eq!(plot.shape(), (12, 40));
//! # Ok::<(), dms_drift::Error>(())
//! ```

pub mod axes;
pub mod cli;
pub mod dataset;
pub mod diagnostics;
pub mod error;
pub mod evaluate;
pub mod grid;
pub mod ingest;
pub mod linalg;
pub mod normalize;
pub mod regress;
mod serde_nan;
pub mod synth;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::axes::{make_axes, Axes, AxesDef};
    pub use crate::dataset::{split_by_tissue, Dataset, DispersionPlot, EnvConditions, EnvField, Sample, Tissue};
    pub use crate::diagnostics::{
        ecdf_band, env_correlations, env_summary, mean_sd_maps, pearson, sorted_trend, spearman, trend_summary,
    };
    pub use crate::evaluate::report::{R2Row, R2Summary};
    pub use crate::evaluate::{
        cross_validate, kfold_split, r_squared, rmse, rmse_vs_sd_map, summarize, CVConfig, CVResult, DenormMode,
        SummaryStats,
    };
    pub use crate::grid::Grid;
    pub use crate::ingest::{ingest_samples, write_csv, write_ndjson, Format, IngestOptions, Strictness};
    pub use crate::normalize::{denormalize_row, normalize_plot, NormalizedPlot, RowStats};
    pub use crate::regress::{
        fit_pixel, fit_plot_model, fit_row, predict_pixel, predict_plot, predict_row, DataMode, FitOptions, Method,
        PixelModel, PlotModel, RowModel,
    };
    pub use crate::synth::{generate_dataset, ground_truth_plot, random_linear_term, RidgeSpec, SynthSpec};
    pub use crate::Error;
}
