//! SV-row-wise min-max scaling of dispersion plots to [-1, 1].
//!
//! Each row is mapped by `y_s = 2 (y - min) / (max - min) - 1` using that
//! row's own extremes; the inverse is `y = (y_s + 1) (max - min) / 2 + min`.
//! A constant row has no span and is mapped to 0 throughout.

use serde::{Deserialize, Serialize};

use crate::dataset::DispersionPlot;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Per-row extremes used to scale one plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowStats {
    pub row_min: Vec<f64>,
    pub row_max: Vec<f64>,
    /// Rows whose min equals their max.
    pub degenerate: Vec<bool>,
}

impl RowStats {
    pub fn new(row_min: Vec<f64>, row_max: Vec<f64>) -> Result<Self> {
        if row_min.len() != row_max.len() {
            return Err(Error::validation("row_min and row_max lengths differ"));
        }
        for (r, (lo, hi)) in row_min.iter().zip(&row_max).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || hi < lo {
                return Err(Error::validation(format!(
                    "row {r}: invalid extremes (min {lo}, max {hi})"
                )));
            }
        }
        let degenerate = row_min.iter().zip(&row_max).map(|(a, b)| a == b).collect();
        Ok(RowStats {
            row_min,
            row_max,
            degenerate,
        })
    }

    /// Extremes of every row of `grid`.
    pub fn of(grid: &Grid) -> Self {
        let (row_min, row_max): (Vec<f64>, Vec<f64>) = grid
            .iter_rows()
            .map(|row| {
                row.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                })
            })
            .unzip();
        let degenerate = row_min.iter().zip(&row_max).map(|(a, b)| a == b).collect();
        RowStats {
            row_min,
            row_max,
            degenerate,
        }
    }

    pub fn len(&self) -> usize {
        self.row_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_min.is_empty()
    }

    /// Elementwise mean of several stats, used as non-leaky fallback extremes.
    pub fn mean_of<'a>(stats: impl IntoIterator<Item = &'a RowStats>) -> Result<Self> {
        let mut iter = stats.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::validation("cannot average an empty set of row stats"))?;
        let mut lo = first.row_min.clone();
        let mut hi = first.row_max.clone();
        let mut count = 1.0;
        for s in iter {
            if s.len() != lo.len() {
                return Err(Error::validation("row stats of differing lengths"));
            }
            lo.iter_mut().zip(&s.row_min).for_each(|(a, b)| *a += b);
            hi.iter_mut().zip(&s.row_max).for_each(|(a, b)| *a += b);
            count += 1.0;
        }
        lo.iter_mut().for_each(|v| *v /= count);
        hi.iter_mut().for_each(|v| *v /= count);
        RowStats::new(lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPlot {
    pub values: Grid,
    pub stats: RowStats,
}

/// Scales one row in place given its extremes.
pub fn normalize_row(row: &[f64], row_min: f64, row_max: f64) -> Vec<f64> {
    let span = row_max - row_min;
    if span == 0.0 {
        return vec![0.0; row.len()];
    }
    row.iter().map(|&y| 2.0 * (y - row_min) / span - 1.0).collect()
}

pub fn normalize_grid(grid: &Grid) -> NormalizedPlot {
    let stats = RowStats::of(grid);
    let mut values = Grid::zeros(grid.rows(), grid.cols());
    for r in 0..grid.rows() {
        let scaled = normalize_row(grid.row(r), stats.row_min[r], stats.row_max[r]);
        values.row_mut(r).copy_from_slice(&scaled);
    }
    NormalizedPlot { values, stats }
}

pub fn normalize_plot(plot: &DispersionPlot) -> NormalizedPlot {
    normalize_grid(plot.responses())
}

pub fn denormalize_row(norm_row: &[f64], row_min: f64, row_max: f64) -> Result<Vec<f64>> {
    if !(row_min.is_finite() && row_max.is_finite()) {
        return Err(Error::validation("row extremes must be finite"));
    }
    if row_max < row_min {
        return Err(Error::validation(format!(
            "row_max ({row_max}) is below row_min ({row_min})"
        )));
    }
    let span = row_max - row_min;
    Ok(norm_row.iter().map(|&v| 0.5 * (v + 1.0) * span + row_min).collect())
}

pub fn denormalize_grid(values: &Grid, stats: &RowStats) -> Result<Grid> {
    if stats.len() != values.rows() {
        return Err(Error::validation(format!(
            "row stats cover {} rows, grid has {}",
            stats.len(),
            values.rows()
        )));
    }
    let mut out = Grid::zeros(values.rows(), values.cols());
    for r in 0..values.rows() {
        let row = denormalize_row(values.row(r), stats.row_min[r], stats.row_max[r])?;
        out.row_mut(r).copy_from_slice(&row);
    }
    Ok(out)
}
