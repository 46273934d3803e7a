//! Environment statistics, correlations, an ECDF band for humidity, trend
//! slopes and the mean / SD maps of a synthetic dataset.

use dms_drift::diagnostics::trend_slope_map;
use dms_drift::prelude::*;
use dms_drift::synth::EnvMode;

fn main() -> Result<(), Error> {
    let axes = Axes::default();
    let mut spec = SynthSpec::new(AxesDef::default(), 300, 9);
    spec.env.mode = EnvMode::RandomWalk;
    spec.linear_term = Some(random_linear_term(&axes, 2.0, 9));
    spec.noise_sd = 1.0;
    let (ds, _) = generate_dataset(&spec)?;

    print!("{}", env_summary(&ds)?.to_table());

    println!();
    for c in env_correlations(&ds)? {
        println!(
            "{:>6} ~ {:<6} pearson {:+.3} (p {:.2e})  spearman {:+.3} (p {:.2e})",
            c.x.name(),
            c.y.name(),
            c.pearson_r,
            c.pearson_p,
            c.spearman_rho,
            c.spearman_p
        );
    }

    let h: Vec<f64> = ds.samples().iter().map(|s| s.env.h_abs).collect();
    let band = ecdf_band(&h, 0.05)?;
    let mid = band.sorted_values.len() / 2;
    println!(
        "\nh_abs ECDF: {} distinct values, band +/- {:.3}; at {:.3} g/m3: {:.3} in [{:.3}, {:.3}]",
        band.sorted_values.len(),
        band.band_epsilon,
        band.sorted_values[mid],
        band.cdf_levels[mid],
        band.lower[mid],
        band.upper[mid]
    );

    println!();
    for row in trend_summary(&ds, &EnvField::ALL)? {
        println!(
            "trend by {:<6}: median {:+.4} pA/rank, 95% of pixels in [{:+.4}, {:+.4}]",
            row.sort_key.name(),
            row.median,
            row.q2_5,
            row.q97_5
        );
    }
    let slopes = trend_slope_map(&ds, EnvField::HAbs)?;
    println!("largest |slope| sorted by h_abs: {:.4} pA/rank", slopes.max_abs());

    let maps = mean_sd_maps(&ds)?;
    println!(
        "\nmean map max {:.2} pA, SD map max {:.2} pA, mean - 3 SD min {:.2} pA",
        maps.mean.as_slice().iter().cloned().fold(f64::MIN, f64::max),
        maps.sd.as_slice().iter().cloned().fold(f64::MIN, f64::max),
        maps.mean_minus_3sd.as_slice().iter().cloned().fold(f64::MAX, f64::min),
    );
    Ok(())
}
