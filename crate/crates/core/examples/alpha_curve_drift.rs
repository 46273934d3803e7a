//! A humidity-shifted ridge emulating an alpha curve: compares raw and
//! row-normalized models on the ridge pixels.
//!
//! Optional positional arguments override the ridge: base CV at the lowest
//! SV, bend, humidity shift (V per g/m³), amplitude (pA), amplitude slope
//! (pA/°C), width (V), amplitude jitter, noise SD (pA).

use dms_drift::prelude::*;
use dms_drift::synth::ridge_pixels;

fn main() -> Result<(), Error> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().map_err(|_| Error::Validation(format!("not a number: {a}"))))
        .collect::<Result<_, _>>()?;
    let arg = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);

    let axes = Axes::default();
    let mut spec = SynthSpec::new(AxesDef::default(), 500, 11);
    spec.ridge = Some(RidgeSpec {
        base_cv: RidgeSpec::alpha_curve(&axes, arg(0, 1.0), arg(1, -0.8)),
        humidity_shift: arg(2, 1.0),
        amplitude: arg(3, 60.0),
        amplitude_t_slope: arg(4, 5.0),
        t_ref: 28.0,
        width: arg(5, 0.4),
        amplitude_jitter: arg(6, 0.3),
    });
    spec.noise_sd = arg(7, 1.0);
    let (ds, _) = generate_dataset(&spec)?;
    let ridge = ridge_pixels(&spec, 0.5)?;
    println!("{} samples, {} ridge pixels", ds.len(), ridge.len());

    for method in Method::ALL {
        for data_mode in DataMode::ALL {
            let cfg = CVConfig {
                method,
                data_mode,
                ..Default::default()
            };
            let cv = cross_validate(&ds, &cfg)?;
            let diff = rmse_vs_sd_map(&ds, &cv)?;
            let below = ridge.iter().filter(|&&(r, c)| diff.get(r, c) > 0.0).count();
            let r2: Vec<f64> = cv.r_squared_values().into_iter().filter(|v| v.is_finite()).collect();
            let mean = r2.iter().sum::<f64>() / r2.len() as f64;
            println!(
                "{:<13} {:<5} mean R2 {mean:.4}  ridge pixels with RMSE < SD {below}/{}  max RMSE {:.2} pA",
                method.label(),
                data_mode.label(),
                ridge.len(),
                cv.rmse_map.max_abs()
            );
        }
    }
    Ok(())
}
