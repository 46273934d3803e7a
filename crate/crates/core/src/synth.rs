//! Synthetic dispersion plots with known environmental dependence.
//!
//! A plot is the sum of an optional per-pixel linear term
//! `a0 + a1 t_meas + a2 t_fet + a3 h_abs` and an optional ridge: in every SV
//! row a Gaussian profile over CV whose centre moves linearly with `h_abs`
//! and whose height grows linearly with `t_meas`. Each sample may also carry
//! a random multiplicative ridge factor (sample-amount variation that no
//! regressor explains), and i.i.d. Gaussian noise is added on top.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::axes::{Axes, AxesDef};
use crate::dataset::{Dataset, DispersionPlot, EnvConditions, Sample, Tissue};
use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvMode {
    /// Independent uniform draws within each range.
    #[default]
    Uniform,
    /// Reflected Gaussian random walk starting mid-range; steps have SD 5 % of the range.
    RandomWalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvRanges {
    pub t_meas: (f64, f64),
    pub t_fet: (f64, f64),
    pub h_abs: (f64, f64),
    #[serde(default)]
    pub mode: EnvMode,
}

impl Default for EnvRanges {
    /// Roughly the spread seen in a surgical-smoke campaign.
    fn default() -> Self {
        EnvRanges {
            t_meas: (24.7, 31.1),
            t_fet: (41.9, 48.2),
            h_abs: (1.84, 2.66),
            mode: EnvMode::Uniform,
        }
    }
}

impl EnvRanges {
    fn bounds(&self) -> [(f64, f64); 3] {
        [self.t_meas, self.t_fet, self.h_abs]
    }

    pub fn midpoint(&self) -> EnvConditions {
        let m = |(lo, hi): (f64, f64)| 0.5 * (lo + hi);
        EnvConditions {
            t_meas: m(self.t_meas),
            t_fet: m(self.t_fet),
            h_abs: m(self.h_abs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeSpec {
    /// Ridge centre (V) per SV row at zero humidity.
    pub base_cv: Vec<f64>,
    /// Centre shift in V per g/m³ of absolute humidity.
    pub humidity_shift: f64,
    /// Peak height in pA at `t_ref`.
    pub amplitude: f64,
    /// Height change in pA per °C of `t_meas - t_ref`.
    #[serde(default)]
    pub amplitude_t_slope: f64,
    #[serde(default)]
    pub t_ref: f64,
    /// Gaussian width (standard deviation) in V.
    pub width: f64,
    /// SD of the log of a per-sample multiplicative height factor; 0 disables it.
    #[serde(default)]
    pub amplitude_jitter: f64,
}

impl RidgeSpec {
    /// Ridge bending toward lower CV as SV rises, starting at `cv_low_sv`
    /// in the first row and moving by `bend` V over the SV range.
    pub fn alpha_curve(axes: &Axes, cv_low_sv: f64, bend: f64) -> Vec<f64> {
        let n = axes.sv_steps();
        (0..n)
            .map(|r| cv_low_sv + bend * (r as f64 / (n - 1) as f64).powi(2))
            .collect()
    }

    pub fn center(&self, row: usize, h_abs: f64) -> f64 {
        self.base_cv[row] + self.humidity_shift * h_abs
    }

    pub fn height(&self, t_meas: f64) -> f64 {
        self.amplitude + self.amplitude_t_slope * (t_meas - self.t_ref)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    #[serde(default)]
    pub axes: AxesDef,
    pub n_samples: usize,
    #[serde(default = "default_tissue")]
    pub tissue: Tissue,
    #[serde(default)]
    pub env: EnvRanges,
    #[serde(default)]
    pub ridge: Option<RidgeSpec>,
    /// Row-major per-pixel `(a0, a1, a2, a3)`.
    #[serde(default)]
    pub linear_term: Option<Vec<[f64; 4]>>,
    #[serde(default)]
    pub noise_sd: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_tissue() -> Tissue {
    Tissue::adipose()
}

impl SynthSpec {
    pub fn new(axes: AxesDef, n_samples: usize, seed: u64) -> Self {
        SynthSpec {
            axes,
            n_samples,
            tissue: default_tissue(),
            env: EnvRanges::default(),
            ridge: None,
            linear_term: None,
            noise_sd: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<Axes> {
        let axes = Axes::new(self.axes)?;
        if self.n_samples == 0 {
            return Err(Error::validation("n_samples must be positive"));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::validation("noise_sd must be a non-negative number"));
        }
        for (name, (lo, hi)) in ["t_meas", "t_fet", "h_abs"].iter().zip(self.env.bounds()) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::validation(format!(
                    "{name} range needs low < high (got {lo}, {hi})"
                )));
            }
        }
        if self.env.h_abs.0 <= 0.0 {
            return Err(Error::validation("h_abs range must be positive"));
        }
        if let Some(r) = &self.ridge {
            if !(r.width > 0.0 && r.width.is_finite()) {
                return Err(Error::validation("ridge width must be positive"));
            }
            if r.base_cv.len() != axes.sv_steps() {
                return Err(Error::validation(format!(
                    "ridge base_cv has {} entries, axes have {} SV rows",
                    r.base_cv.len(),
                    axes.sv_steps()
                )));
            }
            if r.amplitude_jitter.is_nan() || r.amplitude_jitter < 0.0 {
                return Err(Error::validation("amplitude_jitter must be non-negative"));
            }
        }
        if let Some(lt) = &self.linear_term {
            let (rows, cols) = axes.shape();
            if lt.len() != rows * cols {
                return Err(Error::validation(format!(
                    "linear_term has {} pixels, axes need {}",
                    lt.len(),
                    rows * cols
                )));
            }
        }
        Ok(axes)
    }
}

/// Random per-pixel coefficients of plausible magnitude, scaled by `scale`.
pub fn random_linear_term(axes: &Axes, scale: f64, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, cols) = axes.shape();
    (0..rows * cols)
        .map(|_| {
            [
                scale * rng.gen_range(-20.0..20.0),
                scale * rng.gen_range(-2.0..2.0),
                scale * rng.gen_range(-1.0..1.0),
                scale * rng.gen_range(-10.0..10.0),
            ]
        })
        .collect()
}

fn truth_grid(spec: &SynthSpec, axes: &Axes, env: &EnvConditions, ridge_factor: f64) -> Grid {
    let (rows, cols) = axes.shape();
    let cv = axes.cv_values();
    Grid::from_fn(rows, cols, |r, c| {
        let mut v = 0.0;
        if let Some(lt) = &spec.linear_term {
            let [a0, a1, a2, a3] = lt[r * cols + c];
            v += a0 + a1 * env.t_meas + a2 * env.t_fet + a3 * env.h_abs;
        }
        if let Some(ridge) = &spec.ridge {
            let d = (cv[c] - ridge.center(r, env.h_abs)) / ridge.width;
            v += ridge_factor * ridge.height(env.t_meas) * (-0.5 * d * d).exp();
        }
        v
    })
}

/// Noise-free plot for `env` (no per-sample ridge factor).
pub fn ground_truth_plot(spec: &SynthSpec, env: &EnvConditions) -> Result<DispersionPlot> {
    let axes = spec.validate()?;
    DispersionPlot::new(truth_grid(spec, &axes, env, 1.0))
}

/// Pixels where the ridge at mid-range conditions reaches at least
/// `fraction` of its peak height.
pub fn ridge_pixels(spec: &SynthSpec, fraction: f64) -> Result<Vec<(usize, usize)>> {
    let axes = spec.validate()?;
    let Some(ridge) = &spec.ridge else {
        return Ok(Vec::new());
    };
    let env = spec.env.midpoint();
    let (rows, cols) = axes.shape();
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let d = (axes.cv_values()[c] - ridge.center(r, env.h_abs)) / ridge.width;
            if (-0.5 * d * d).exp() >= fraction {
                out.push((r, c));
            }
        }
    }
    Ok(out)
}

/// Generator record kept alongside a synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub spec: SynthSpec,
    /// Noise-free plots, in sample order (ids `0..n`).
    pub plots: Vec<DispersionPlot>,
    /// Per-sample multiplicative ridge factor (1 without jitter).
    pub ridge_factors: Vec<f64>,
}

fn draw_envs(spec: &SynthSpec, rng: &mut ChaCha8Rng) -> Vec<EnvConditions> {
    let bounds = spec.env.bounds();
    let mut state: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
    let step = Normal::new(0.0, 1.0).expect("unit normal");
    (0..spec.n_samples)
        .map(|_| {
            let v: Vec<f64> = match spec.env.mode {
                EnvMode::Uniform => bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect(),
                EnvMode::RandomWalk => {
                    for (x, &(lo, hi)) in state.iter_mut().zip(&bounds) {
                        let width = hi - lo;
                        let mut next = *x + 0.05 * width * step.sample(rng);
                        // reflect into [lo, hi]
                        while next < lo || next > hi {
                            next = if next < lo { 2.0 * lo - next } else { 2.0 * hi - next };
                        }
                        *x = next;
                    }
                    state.clone()
                }
            };
            EnvConditions {
                t_meas: v[0],
                t_fet: v[1],
                h_abs: v[2],
            }
        })
        .collect()
}

/// Draws a dataset. Deterministic for a given spec (including its seed).
pub fn generate_dataset(spec: &SynthSpec) -> Result<(Dataset, GroundTruth)> {
    let axes = spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let envs = draw_envs(spec, &mut rng);
    let noise = Normal::new(0.0, spec.noise_sd).map_err(|e| Error::validation(e.to_string()))?;
    let jitter = spec.ridge.as_ref().map_or(0.0, |r| r.amplitude_jitter);
    let jitter_dist = Normal::new(0.0, jitter).map_err(|e| Error::validation(e.to_string()))?;

    let mut samples = Vec::with_capacity(spec.n_samples);
    let mut truths = Vec::with_capacity(spec.n_samples);
    let mut factors = Vec::with_capacity(spec.n_samples);
    for (i, env) in envs.into_iter().enumerate() {
        let factor = if jitter > 0.0 {
            jitter_dist.sample(&mut rng).exp()
        } else {
            1.0
        };
        let truth = truth_grid(spec, &axes, &env, factor);
        let mut observed = truth.clone();
        if spec.noise_sd > 0.0 {
            for r in 0..observed.rows() {
                for v in observed.row_mut(r) {
                    *v += noise.sample(&mut rng);
                }
            }
        }
        samples.push(Sample {
            id: i as u64,
            tissue: spec.tissue.clone(),
            plot: DispersionPlot::new(observed)?,
            env,
            matrix_id: None,
        });
        truths.push(DispersionPlot::new(truth)?);
        factors.push(factor);
    }
    let ds = Dataset::new(axes, samples)?;
    Ok((
        ds,
        GroundTruth {
            spec: spec.clone(),
            plots: truths,
            ridge_factors: factors,
        },
    ))
}
