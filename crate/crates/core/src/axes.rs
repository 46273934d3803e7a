use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Defining parameters of a voltage grid, as they appear in file headers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxesDef {
    pub cv_start: f64,
    pub cv_stop: f64,
    pub cv_steps: usize,
    pub sv_start: f64,
    pub sv_stop: f64,
    pub sv_steps: usize,
}

impl Default for AxesDef {
    /// The instrument configuration of the surgical-smoke campaign:
    /// CV from -0.8 V to 5 V in 40 steps, SV from 350 V to 700 V in 12 steps.
    fn default() -> Self {
        AxesDef {
            cv_start: -0.8,
            cv_stop: 5.0,
            cv_steps: 40,
            sv_start: 350.0,
            sv_stop: 700.0,
            sv_steps: 12,
        }
    }
}

/// Compensation-voltage (columns) and separation-voltage (rows) grids.
///
/// Grids are uniform and endpoint-exclusive: point `i` sits at
/// `start + i * (stop - start) / steps`, so `stop` itself is never sampled.
/// With the default definition this yields CV 4.855 V at index 39 and
/// SV 641.667 V at index 10.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxesDef", into = "AxesDef")]
pub struct Axes {
    def: AxesDef,
    cv_values: Vec<f64>,
    sv_values: Vec<f64>,
}

impl Axes {
    pub fn new(def: AxesDef) -> Result<Self> {
        let check = |name: &str, start: f64, stop: f64, steps: usize| -> Result<Vec<f64>> {
            if !start.is_finite() || !stop.is_finite() {
                return Err(Error::validation(format!(
                    "{name} bounds must be finite (got {start}, {stop})"
                )));
            }
            if steps < 2 {
                return Err(Error::validation(format!(
                    "{name}_steps must be at least 2 (got {steps})"
                )));
            }
            if stop <= start {
                return Err(Error::validation(format!(
                    "{name}_stop ({stop}) must exceed {name}_start ({start})"
                )));
            }
            let step = (stop - start) / steps as f64;
            Ok((0..steps).map(|i| start + i as f64 * step).collect())
        };
        let cv_values = check("cv", def.cv_start, def.cv_stop, def.cv_steps)?;
        let sv_values = check("sv", def.sv_start, def.sv_stop, def.sv_steps)?;
        Ok(Axes {
            def,
            cv_values,
            sv_values,
        })
    }

    pub fn def(&self) -> AxesDef {
        self.def
    }

    pub fn cv_values(&self) -> &[f64] {
        &self.cv_values
    }

    pub fn sv_values(&self) -> &[f64] {
        &self.sv_values
    }

    pub fn cv_steps(&self) -> usize {
        self.def.cv_steps
    }

    pub fn sv_steps(&self) -> usize {
        self.def.sv_steps
    }

    /// `(rows, cols)` of a plot on this grid.
    pub fn shape(&self) -> (usize, usize) {
        (self.def.sv_steps, self.def.cv_steps)
    }
}

impl Default for Axes {
    fn default() -> Self {
        Axes::new(AxesDef::default()).expect("default axes are valid")
    }
}

impl TryFrom<AxesDef> for Axes {
    type Error = Error;

    fn try_from(def: AxesDef) -> Result<Self> {
        Axes::new(def)
    }
}

impl From<Axes> for AxesDef {
    fn from(a: Axes) -> Self {
        a.def
    }
}

/// Positional constructor mirroring the usual argument order.
pub fn make_axes(
    cv_start: f64,
    cv_stop: f64,
    cv_steps: usize,
    sv_start: f64,
    sv_stop: f64,
    sv_steps: usize,
) -> Result<Axes> {
    Axes::new(AxesDef {
        cv_start,
        cv_stop,
        cv_steps,
        sv_start,
        sv_stop,
        sv_steps,
    })
}
