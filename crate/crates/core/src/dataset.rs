use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::axes::Axes;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Environmental regressors recorded with each measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvConditions {
    /// Sample temperature, °C.
    pub t_meas: f64,
    /// Internal FET sensor temperature, °C.
    pub t_fet: f64,
    /// Absolute humidity, g/m³.
    pub h_abs: f64,
}

impl EnvConditions {
    pub fn new(t_meas: f64, t_fet: f64, h_abs: f64) -> Result<Self> {
        let env = EnvConditions { t_meas, t_fet, h_abs };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_meas.is_finite() && self.t_fet.is_finite() && self.h_abs.is_finite()) {
            return Err(Error::validation(format!(
                "environment values must be finite (t_meas={}, t_fet={}, h_abs={})",
                self.t_meas, self.t_fet, self.h_abs
            )));
        }
        if self.h_abs <= 0.0 {
            return Err(Error::validation(format!(
                "h_abs must be positive (got {})",
                self.h_abs
            )));
        }
        Ok(())
    }

    /// Regressor vector `[t_meas, t_fet, h_abs]`, prefixed with 1 when `intercept`.
    pub fn regressors(&self, intercept: bool) -> Vec<f64> {
        let mut v = Vec::with_capacity(4);
        if intercept {
            v.push(1.0);
        }
        v.extend_from_slice(&[self.t_meas, self.t_fet, self.h_abs]);
        v
    }

    pub fn field(&self, key: EnvField) -> f64 {
        match key {
            EnvField::TMeas => self.t_meas,
            EnvField::TFet => self.t_fet,
            EnvField::HAbs => self.h_abs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvField {
    TMeas,
    TFet,
    HAbs,
}

impl EnvField {
    pub const ALL: [EnvField; 3] = [EnvField::TMeas, EnvField::TFet, EnvField::HAbs];

    pub fn name(self) -> &'static str {
        match self {
            EnvField::TMeas => "t_meas",
            EnvField::TFet => "t_fet",
            EnvField::HAbs => "h_abs",
        }
    }
}

impl fmt::Display for EnvField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ion-current responses in pA, SV rows by CV columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Grid", into = "Grid")]
pub struct DispersionPlot {
    responses: Grid,
}

impl DispersionPlot {
    pub fn new(responses: Grid) -> Result<Self> {
        if !responses.is_finite() {
            return Err(Error::validation("dispersion plot contains non-finite responses"));
        }
        Ok(DispersionPlot { responses })
    }

    pub fn responses(&self) -> &Grid {
        &self.responses
    }

    pub fn into_grid(self) -> Grid {
        self.responses
    }

    pub fn shape(&self) -> (usize, usize) {
        self.responses.shape()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        self.responses.row(r)
    }

    pub fn get(&self, sv: usize, cv: usize) -> f64 {
        self.responses.get(sv, cv)
    }
}

impl TryFrom<Grid> for DispersionPlot {
    type Error = Error;

    fn try_from(g: Grid) -> Result<Self> {
        DispersionPlot::new(g)
    }
}

impl From<DispersionPlot> for Grid {
    fn from(p: DispersionPlot) -> Self {
        p.responses
    }
}

/// Tissue label. Open-ended; `adipose` and `muscle` are the common ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tissue(pub String);

impl Tissue {
    pub fn adipose() -> Self {
        Tissue("adipose".into())
    }

    pub fn muscle() -> Self {
        Tissue("muscle".into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tissue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Tissue {
    fn from(s: &str) -> Self {
        Tissue(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Acquisition ordinal; sampling order.
    pub id: u64,
    pub tissue: Tissue,
    pub plot: DispersionPlot,
    pub env: EnvConditions,
    pub matrix_id: Option<String>,
}

/// Samples on one shared voltage grid, ordered by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    axes: Arc<Axes>,
    samples: Vec<Sample>,
}

impl Dataset {
    /// Validates shapes, env values and id uniqueness, then sorts by id.
    pub fn new(axes: Axes, samples: Vec<Sample>) -> Result<Self> {
        Self::with_shared_axes(Arc::new(axes), samples)
    }

    pub fn with_shared_axes(axes: Arc<Axes>, mut samples: Vec<Sample>) -> Result<Self> {
        let shape = axes.shape();
        let mut seen = HashSet::with_capacity(samples.len());
        for s in &samples {
            if s.plot.shape() != shape {
                return Err(Error::validation(format!(
                    "sample {} has a {}x{} plot, axes require {}x{}",
                    s.id,
                    s.plot.shape().0,
                    s.plot.shape().1,
                    shape.0,
                    shape.1
                )));
            }
            s.env
                .validate()
                .map_err(|e| Error::validation(format!("sample {}: {e}", s.id)))?;
            if !seen.insert(s.id) {
                return Err(Error::validation(format!("duplicate sample id {}", s.id)));
            }
        }
        samples.sort_by_key(|s| s.id);
        Ok(Dataset { axes, samples })
    }

    pub fn empty(axes: Axes) -> Self {
        Dataset {
            axes: Arc::new(axes),
            samples: Vec::new(),
        }
    }

    pub fn axes(&self) -> &Axes {
        &self.axes
    }

    pub fn shared_axes(&self) -> Arc<Axes> {
        Arc::clone(&self.axes)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn ids(&self) -> Vec<u64> {
        self.samples.iter().map(|s| s.id).collect()
    }

    pub fn envs(&self) -> Vec<EnvConditions> {
        self.samples.iter().map(|s| s.env).collect()
    }

    /// Responses at one pixel across all samples, in dataset order.
    pub fn pixel_series(&self, sv: usize, cv: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.plot.get(sv, cv)).collect()
    }

    pub fn tissue_counts(&self) -> BTreeMap<Tissue, usize> {
        let mut counts = BTreeMap::new();
        for s in &self.samples {
            *counts.entry(s.tissue.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// The tissue shared by every sample, or `None` when empty or mixed.
    pub fn single_tissue(&self) -> Option<&Tissue> {
        let first = &self.samples.first()?.tissue;
        self.samples.iter().all(|s| &s.tissue == first).then_some(first)
    }

    /// Keeps the samples matching `pred`, preserving order.
    pub fn filter(&self, mut pred: impl FnMut(&Sample) -> bool) -> Dataset {
        Dataset {
            axes: Arc::clone(&self.axes),
            samples: self.samples.iter().filter(|s| pred(s)).cloned().collect(),
        }
    }

    /// Samples whose ids are in `ids`, in dataset order.
    pub fn subset(&self, ids: &HashSet<u64>) -> Dataset {
        self.filter(|s| ids.contains(&s.id))
    }
}

/// Partitions a dataset by tissue label, preserving per-tissue order.
pub fn split_by_tissue(ds: &Dataset) -> BTreeMap<Tissue, Dataset> {
    let mut groups: BTreeMap<Tissue, Vec<Sample>> = BTreeMap::new();
    for s in ds.samples() {
        groups.entry(s.tissue.clone()).or_default().push(s.clone());
    }
    groups
        .into_iter()
        .map(|(t, samples)| {
            (
                t,
                Dataset {
                    axes: ds.shared_axes(),
                    samples,
                },
            )
        })
        .collect()
}
