//! Fit both model families on synthetic data, save a model as JSON, reload it
//! and predict a plot for new conditions.

use dms_drift::prelude::*;

fn main() -> Result<(), Error> {
    let axes = Axes::default();
    let mut spec = SynthSpec::new(AxesDef::default(), 200, 5);
    spec.linear_term = Some(random_linear_term(&axes, 2.0, 5));
    spec.noise_sd = 0.5;
    let (ds, _) = generate_dataset(&spec)?;

    let env = EnvConditions::new(27.5, 44.0, 2.2)?;
    let truth = ground_truth_plot(&spec, &env)?;

    for method in Method::ALL {
        let opts = FitOptions {
            method,
            ..Default::default()
        };
        let model = fit_plot_model(&ds, &opts)?;
        let r2: Vec<f64> = model.r_squared_values();
        let mean_r2 = r2.iter().sum::<f64>() / r2.len() as f64;
        let pred = predict_plot(&model, &env, None)?;
        let err = pred.responses().sub(truth.responses()).max_abs();
        println!(
            "{:<13} mean training R2 {mean_r2:.4}, max |pred - truth| {err:.3} pA",
            method.label()
        );
    }

    let model = fit_plot_model(&ds, &FitOptions::default())?;
    let json = model.to_json()?;
    let loaded = PlotModel::from_json(&json)?;
    let a = predict_plot(&model, &env, None)?;
    let b = predict_plot(&loaded, &env, None)?;
    assert_eq!(a, b);
    println!("model JSON: {} bytes, reload predicts identically", json.len());

    let c = loaded.pixel_models.as_ref().expect("pixel models")[6 * 40 + 20].coeffs;
    println!(
        "pixel (6, 20): {:.3} + {:.3} t_meas + {:.3} t_fet + {:.3} h_abs",
        c[0], c[1], c[2], c[3]
    );
    Ok(())
}
