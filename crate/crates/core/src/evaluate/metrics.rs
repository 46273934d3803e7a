use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantile levels (percent) of the R² summary table.
pub const R2_TABLE_LEVELS: [f64; 5] = [2.5, 25.0, 50.0, 75.0, 97.5];
/// Quantile levels (percent) of the environment summary table.
pub const ENV_TABLE_LEVELS: [f64; 3] = [2.5, 50.0, 97.5];
/// Stated in every report that carries quantiles.
pub const QUANTILE_CONVENTION: &str = "linear interpolation between closest ranks, position = 1 + q (n - 1)";

/// Coefficient of determination `1 - SS_res / SS_tot`, with
/// `SS_tot = Σ (y_i - ȳ)²`. Negative values are possible out of sample.
pub fn r_squared(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::validation(format!(
            "r_squared: {} observations vs {} predictions",
            y.len(),
            y_hat.len()
        )));
    }
    if y.len() < 2 {
        return Err(Error::validation("r_squared needs at least two observations"));
    }
    let m = mean(y);
    let ss_tot: f64 = y.iter().map(|v| (v - m) * (v - m)).sum();
    if ss_tot == 0.0 {
        return Err(Error::Undefined(
            "R² is undefined for constant observations (zero total sum of squares)".into(),
        ));
    }
    let ss_res: f64 = y.iter().zip(y_hat).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// [`r_squared`] with undefined cases mapped to NaN.
pub fn r_squared_or_nan(y: &[f64], y_hat: &[f64]) -> f64 {
    r_squared(y, y_hat).unwrap_or(f64::NAN)
}

/// Root mean square of `errors`; NaN for an empty slice.
pub fn rmse(errors: &[f64]) -> f64 {
    if errors.is_empty() {
        return f64::NAN;
    }
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n - 1 divisor); NaN for fewer than two values.
pub fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Quantile of ascending `sorted` at `level` percent.
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (level / 100.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileValue {
    /// Percent.
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    #[serde(with = "crate::serde_nan")]
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub quantiles: Vec<QuantileValue>,
}

impl SummaryStats {
    /// Value at `level` percent, if it was requested.
    pub fn quantile(&self, level: f64) -> Option<f64> {
        self.quantiles
            .iter()
            .find(|q| (q.level - level).abs() < 1e-9)
            .map(|q| q.value)
    }
}

pub fn summarize(values: &[f64], levels: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::validation("cannot summarize an empty vector"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("cannot summarize non-finite values"));
    }
    if let Some(l) = levels.iter().find(|l| !(0.0..=100.0).contains(*l)) {
        return Err(Error::validation(format!("quantile level {l} outside [0, 100]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(SummaryStats {
        n: values.len(),
        mean: mean(values),
        sd: sample_sd(values),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        quantiles: levels
            .iter()
            .map(|&level| QuantileValue {
                level,
                value: quantile_sorted(&sorted, level),
            })
            .collect(),
    })
}
