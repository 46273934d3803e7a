//! Ten-fold cross-validation of all four model variants on two tissues and
//! the resulting R² summary table.

use dms_drift::evaluate::report::write_map_csv;
use dms_drift::prelude::*;

fn main() -> Result<(), Error> {
    let axes = Axes::default();
    let mut samples = Vec::new();
    for (tissue, seed, offset) in [("adipose", 1, 0), ("muscle", 2, 1000)] {
        let mut spec = SynthSpec::new(AxesDef::default(), 150, seed);
        spec.tissue = Tissue::from(tissue);
        spec.linear_term = Some(random_linear_term(&axes, 2.0, seed));
        spec.noise_sd = 2.0;
        let (ds, _) = generate_dataset(&spec)?;
        samples.extend(ds.samples().iter().cloned().map(|mut s| {
            s.id += offset;
            s
        }));
    }
    let ds = Dataset::new(axes, samples)?;
    println!("{:?}", ds.tissue_counts());

    let mut results = Vec::new();
    for (_, part) in split_by_tissue(&ds) {
        for method in Method::ALL {
            for data_mode in DataMode::ALL {
                let cfg = CVConfig {
                    method,
                    data_mode,
                    seed: 42,
                    ..Default::default()
                };
                results.push(cross_validate(&part, &cfg)?);
            }
        }
    }
    print!("{}", R2Summary::from_results(&results)?.to_table());

    let cv = &results[0];
    let rmse = cv.rmse_map.as_slice();
    let mean_rmse = rmse.iter().sum::<f64>() / rmse.len() as f64;
    println!(
        "{} / {} / {}: mean held-out RMSE {mean_rmse:.3} pA (noise 2.0)",
        cv.tissue,
        cv.config.method.label(),
        cv.config.data_mode.label()
    );

    let mut out = Vec::new();
    write_map_csv(&cv.rmse_map, ds.axes(), &mut out)?;
    let text = String::from_utf8(out).expect("utf8");
    println!("rmse_map.csv starts with:");
    for line in text.lines().take(3) {
        println!("  {}...", &line[..line.len().min(70)]);
    }
    Ok(())
}
