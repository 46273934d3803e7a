//! Exploratory statistics: environment summaries, correlations, ECDF
//! confidence bands, rank-ordered trend slopes and mean/SD maps.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::dataset::{Dataset, EnvField, Tissue};
use crate::error::{Error, Result};
use crate::evaluate::metrics::{summarize, SummaryStats, ENV_TABLE_LEVELS, QUANTILE_CONVENTION};
use crate::grid::Grid;

pub const P_VALUE_METHOD: &str =
    "two-sided, t = r sqrt((n - 2) / (1 - r^2)) against Student t with n - 2 degrees of freedom";
pub const BAND_METHOD: &str = "Dvoretzky-Kiefer-Wolfowitz, epsilon = sqrt(ln(2 / alpha) / (2 n))";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub coefficient: f64,
    pub p_value: f64,
    pub n: usize,
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::validation(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::validation("correlation needs at least three pairs"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::validation("correlation inputs must be finite"));
    }
    Ok(())
}

fn t_test_p(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

fn pearson_coefficient(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("correlation of a constant input".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Sample Pearson correlation with a t-test p-value.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    check_pair(x, y)?;
    let r = pearson_coefficient(x, y)?;
    Ok(Correlation {
        coefficient: r,
        p_value: t_test_p(r, x.len()),
        n: x.len(),
    })
}

/// 1-based ranks; ties share the mean of the ranks they span.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson on mid-ranks) with the same t-test p-value.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation> {
    check_pair(x, y)?;
    let rho = pearson_coefficient(&mid_ranks(x), &mid_ranks(y))?;
    Ok(Correlation {
        coefficient: rho,
        p_value: t_test_p(rho, x.len()),
        n: x.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub x: EnvField,
    pub y: EnvField,
    pub n: usize,
    pub pearson_r: f64,
    pub pearson_p: f64,
    pub spearman_rho: f64,
    pub spearman_p: f64,
    pub p_value_method: String,
}

/// Pearson and Spearman correlations between every pair of env fields.
pub fn env_correlations(ds: &Dataset) -> Result<Vec<CorrelationResult>> {
    let col = |f: EnvField| -> Vec<f64> { ds.samples().iter().map(|s| s.env.field(f)).collect() };
    let pairs = [
        (EnvField::TMeas, EnvField::TFet),
        (EnvField::TMeas, EnvField::HAbs),
        (EnvField::TFet, EnvField::HAbs),
    ];
    pairs
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (col(a), col(b));
            let p = pearson(&x, &y)?;
            let s = spearman(&x, &y)?;
            Ok(CorrelationResult {
                x: a,
                y: b,
                n: x.len(),
                pearson_r: p.coefficient,
                pearson_p: p.p_value,
                spearman_rho: s.coefficient,
                spearman_p: s.p_value,
                p_value_method: P_VALUE_METHOD.into(),
            })
        })
        .collect()
}

/// Step ECDF with a simultaneous confidence band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfBand {
    /// Distinct sample values, ascending.
    pub sorted_values: Vec<f64>,
    /// ECDF just after each distinct value; ends at 1.
    pub cdf_levels: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub band_epsilon: f64,
    pub alpha: f64,
    pub n: usize,
    pub method: String,
}

impl EcdfBand {
    /// ECDF value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.sorted_values.partition_point(|&v| v <= x);
        if i == 0 {
            0.0
        } else {
            self.cdf_levels[i - 1]
        }
    }

    /// Whether a continuous CDF stays inside the band everywhere.
    pub fn contains_cdf(&self, cdf: impl Fn(f64) -> f64) -> bool {
        let mut prev = 0.0;
        for (v, level) in self.sorted_values.iter().zip(&self.cdf_levels) {
            let f = cdf(*v);
            // just below v the ECDF is `prev`, at v it is `level`
            if (f - prev).abs() > self.band_epsilon || (f - level).abs() > self.band_epsilon {
                return false;
            }
            prev = *level;
        }
        true
    }
}

pub fn ecdf_band(values: &[f64], alpha: f64) -> Result<EcdfBand> {
    if values.is_empty() {
        return Err(Error::validation("ECDF of an empty sample"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::validation(format!("alpha must lie in (0, 1) (got {alpha})")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("ECDF values must be finite"));
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let eps = ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt();

    let mut distinct = Vec::new();
    let mut levels = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        if i + 1 < n && sorted[i + 1] == v {
            continue;
        }
        distinct.push(v);
        levels.push((i + 1) as f64 / n as f64);
    }
    let lower = levels.iter().map(|l| (l - eps).max(0.0)).collect();
    let upper = levels.iter().map(|l| (l + eps).min(1.0)).collect();
    Ok(EcdfBand {
        sorted_values: distinct,
        cdf_levels: levels,
        lower,
        upper,
        band_epsilon: eps,
        alpha,
        n,
        method: BAND_METHOD.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    /// pA per rank step.
    pub slope: f64,
    /// pA.
    pub intercept: f64,
    pub sort_key: EnvField,
    pub pixel: (usize, usize),
    /// Samples whose sort-key value is shared with another sample; ties are
    /// ordered by id.
    pub tied_samples: usize,
}

/// Least-squares line `y = a x + b` over `x = 1..n`.
pub fn rank_line(y: &[f64]) -> (f64, f64) {
    let n = y.len();
    if n < 2 {
        return (0.0, y.first().copied().unwrap_or(0.0));
    }
    let x_mean = (n as f64 + 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = (i + 1) as f64 - x_mean;
        sxy += dx * (v - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    (slope, y_mean - slope * x_mean)
}

/// Sample order ascending in `key`, ties by id.
fn sort_order(ds: &Dataset, key: EnvField) -> (Vec<usize>, usize) {
    let s = ds.samples();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| {
        s[a].env
            .field(key)
            .total_cmp(&s[b].env.field(key))
            .then(s[a].id.cmp(&s[b].id))
    });
    let mut tied = 0;
    for (i, &k) in order.iter().enumerate() {
        let v = s[k].env.field(key);
        let prev = i > 0 && s[order[i - 1]].env.field(key) == v;
        let next = i + 1 < order.len() && s[order[i + 1]].env.field(key) == v;
        if prev || next {
            tied += 1;
        }
    }
    (order, tied)
}

fn require_single_tissue(ds: &Dataset) -> Result<Tissue> {
    ds.single_tissue()
        .cloned()
        .ok_or_else(|| Error::validation("operation needs a non-empty single-tissue dataset"))
}

pub fn sorted_trend(ds: &Dataset, pixel: (usize, usize), key: EnvField) -> Result<TrendFit> {
    require_single_tissue(ds)?;
    let (rows, cols) = ds.axes().shape();
    if pixel.0 >= rows || pixel.1 >= cols {
        return Err(Error::validation(format!("pixel {pixel:?} outside {rows}x{cols} grid")));
    }
    let (order, tied) = sort_order(ds, key);
    let y: Vec<f64> = order
        .iter()
        .map(|&i| ds.samples()[i].plot.get(pixel.0, pixel.1))
        .collect();
    let (slope, intercept) = rank_line(&y);
    Ok(TrendFit {
        slope,
        intercept,
        sort_key: key,
        pixel,
        tied_samples: tied,
    })
}

/// Slopes of the rank-ordered trend at every pixel for one sort key.
pub fn trend_slope_map(ds: &Dataset, key: EnvField) -> Result<Grid> {
    require_single_tissue(ds)?;
    let (order, _) = sort_order(ds, key);
    let (rows, cols) = ds.axes().shape();
    let s = ds.samples();
    Ok(Grid::from_fn(rows, cols, |r, c| {
        let y: Vec<f64> = order.iter().map(|&i| s[i].plot.get(r, c)).collect();
        rank_line(&y).0
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub tissue: Tissue,
    pub sort_key: EnvField,
    pub median: f64,
    #[serde(rename = "q2.5")]
    pub q2_5: f64,
    #[serde(rename = "q97.5")]
    pub q97_5: f64,
}

/// Median and 2.5/97.5 % quantiles of per-pixel trend slopes, one row per key.
pub fn trend_summary(ds: &Dataset, keys: &[EnvField]) -> Result<Vec<TrendRow>> {
    let tissue = require_single_tissue(ds)?;
    keys.iter()
        .map(|&key| {
            let slopes = trend_slope_map(ds, key)?;
            let s = summarize(slopes.as_slice(), &[2.5, 50.0, 97.5])?;
            Ok(TrendRow {
                tissue: tissue.clone(),
                sort_key: key,
                median: s.quantile(50.0).expect("level"),
                q2_5: s.quantile(2.5).expect("level"),
                q97_5: s.quantile(97.5).expect("level"),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelMaps {
    pub mean: Grid,
    pub sd: Grid,
    pub mean_minus_3sd: Grid,
}

/// Per-pixel mean, sample SD and `mean - 3 SD` over all plots.
pub fn mean_sd_maps(ds: &Dataset) -> Result<PixelMaps> {
    let n = ds.len();
    if n < 2 {
        return Err(Error::validation("mean/SD maps need at least two samples"));
    }
    let (rows, cols) = ds.axes().shape();
    let mut mean = Grid::zeros(rows, cols);
    let mut sd = Grid::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let mut sum = 0.0;
            for s in ds.samples() {
                sum += s.plot.get(r, c);
            }
            let m = sum / n as f64;
            let mut ss = 0.0;
            for s in ds.samples() {
                let d = s.plot.get(r, c) - m;
                ss += d * d;
            }
            mean.set(r, c, m);
            sd.set(r, c, (ss / (n - 1) as f64).sqrt());
        }
    }
    let mean_minus_3sd = Grid::from_fn(rows, cols, |r, c| mean.get(r, c) - 3.0 * sd.get(r, c));
    Ok(PixelMaps {
        mean,
        sd,
        mean_minus_3sd,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvSummary {
    pub quantile_convention: String,
    pub fields: Vec<(EnvField, SummaryStats)>,
}

impl EnvSummary {
    pub fn get(&self, f: EnvField) -> Option<&SummaryStats> {
        self.fields.iter().find(|(k, _)| *k == f).map(|(_, s)| s)
    }

    /// Columns: factor, min, 2.5 %, median, 97.5 %, max.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<8} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
            "factor", "min", "q2.5", "median", "q97.5", "max"
        );
        for (f, s) in &self.fields {
            let q = |l| s.quantile(l).unwrap_or(f64::NAN);
            out.push_str(&format!(
                "{:<8} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>10.2}\n",
                f.name(),
                s.min,
                q(2.5),
                q(50.0),
                q(97.5),
                s.max
            ));
        }
        out
    }
}

/// Min, 2.5 % quantile, median, 97.5 % quantile and max of each env field.
pub fn env_summary(ds: &Dataset) -> Result<EnvSummary> {
    if ds.is_empty() {
        return Err(Error::validation("environment summary of an empty dataset"));
    }
    let fields = EnvField::ALL
        .iter()
        .map(|&f| {
            let v: Vec<f64> = ds.samples().iter().map(|s| s.env.field(f)).collect();
            Ok((f, summarize(&v, &ENV_TABLE_LEVELS)?))
        })
        .collect::<Result<_>>()?;
    Ok(EnvSummary {
        quantile_convention: QUANTILE_CONVENTION.into(),
        fields,
    })
}
