//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints one PASS/FAIL line; exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::fs::File;
use std::time::{Duration, Instant};

use common::*;
use dms_drift::cli::main_with_args;
use dms_drift::evaluate::report::R2_COLUMNS;
use dms_drift::normalize::{denormalize_grid, normalize_grid};
use dms_drift::prelude::*;
use dms_drift::synth::ridge_pixels;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn axis_fidelity() -> Outcome {
    let axes = make_axes(-0.8, 5.0, 40, 350.0, 700.0, 12).map_err(err)?;
    let (cv, sv) = (axes.cv_values(), axes.sv_values());
    let pins = [(cv[39], 4.855), (cv[13], 1.085), (sv[9], 612.5), (sv[10], 641.667)];
    let worst = pins.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    check(worst <= 0.0005, format!("max deviation {worst:.2e} V"))?;
    Ok(format!(
        "CV {:.3}/{:.3} V, SV {:.3}/{:.3} V, max deviation {worst:.1e} V",
        cv[39], cv[13], sv[9], sv[10]
    ))
}

fn normalization_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut degenerate = 0;
    for i in 0..1000 {
        let scale = 10f64.powi(rng.gen_range(-3..5));
        let offset = rng.gen_range(-1.0..1.0) * scale * 3.0;
        let grid = Grid::from_fn(12, 40, |r, _| {
            if (i + r) % 17 == 0 {
                offset
            } else {
                offset + scale * rng.gen_range(-1.0..1.0)
            }
        });
        let norm = normalize_grid(&grid);
        let back = denormalize_grid(&norm.values, &norm.stats).map_err(err)?;
        for r in 0..12 {
            let row = grid.row(r);
            let extent = row.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            for (c, v) in row.iter().enumerate() {
                worst = worst.max((back.get(r, c) - v).abs() / extent);
            }
            if norm.stats.degenerate[r] {
                degenerate += 1;
                check(
                    norm.values.row(r).iter().all(|v| *v == 0.0),
                    format!("degenerate row {r} of plot {i} not 0"),
                )?;
            }
        }
    }
    check(worst <= 1e-12, format!("max relative error {worst:.2e}"))?;
    check(degenerate > 0, "no degenerate rows exercised")?;
    Ok(format!(
        "1000 plots, max relative error {worst:.1e}, {degenerate} degenerate rows mapped to 0"
    ))
}

fn oracle_equivalence() -> Outcome {
    let (mut row_vs_pixel, mut vs_oracle) = (0.0f64, 0.0f64);
    for seed in 0..30 {
        let (ds, _) = linear_dataset(200, 1.0, 1000 + seed);
        let fit = |method| {
            let opts = FitOptions {
                method,
                ..Default::default()
            };
            fit_plot_model(&ds, &opts)
        };
        let pixel = fit(Method::PerPixelLinear).map_err(err)?;
        let row = fit(Method::PerRowMultivariate).map_err(err)?;
        let pms = pixel.pixel_models.as_ref().ok_or("missing pixel models")?;
        let rms = row.row_models.as_ref().ok_or("missing row models")?;
        let x = env_rows(&ds.envs());
        for r in 0..12 {
            for c in 0..40 {
                let pm = &pms[r * 40 + c];
                let y = ds.pixel_series(r, c);
                let oracle = normal_equations(&x, &y, true);
                for (j, o) in oracle.iter().enumerate() {
                    let rc = rms[r].coefficients.get(j, c);
                    row_vs_pixel = row_vs_pixel.max((rc - pm.coeffs[j]).abs());
                    vs_oracle = vs_oracle.max((rc - o).abs()).max((pm.coeffs[j] - o).abs());
                }
            }
        }
    }
    check(row_vs_pixel <= 1e-10, format!("row vs pixel {row_vs_pixel:.2e}"))?;
    check(vs_oracle <= 1e-8, format!("vs normal equations {vs_oracle:.2e}"))?;
    Ok(format!(
        "30 datasets x 480 pixels: row vs pixel {row_vs_pixel:.1e}, vs normal equations {vs_oracle:.1e}"
    ))
}

fn noise_recovery() -> Outcome {
    let (ds, _) = linear_dataset(500, 2.0, 4);
    let cv = cross_validate(&ds, &CVConfig::default()).map_err(err)?;
    let rmse = cv.rmse_map.as_slice();
    let inside = rmse.iter().filter(|v| (1.7..=2.3).contains(*v)).count();
    let share = inside as f64 / rmse.len() as f64;
    check(share >= 0.9, format!("{inside}/{} pixels in [1.7, 2.3] pA", rmse.len()))?;
    Ok(format!(
        "{inside}/{} pixel RMSEs in [1.7, 2.3] pA ({:.1} %)",
        rmse.len(),
        100.0 * share
    ))
}

/// Humidity-shifted alpha-curve ridge whose height also follows t_meas.
fn ridge_spec() -> SynthSpec {
    let axes = Axes::default();
    let mut spec = SynthSpec::new(AxesDef::default(), 500, 11);
    spec.ridge = Some(RidgeSpec {
        base_cv: RidgeSpec::alpha_curve(&axes, 1.0, -0.8),
        humidity_shift: 1.0,
        amplitude: 60.0,
        amplitude_t_slope: 5.0,
        t_ref: 28.0,
        width: 0.4,
        amplitude_jitter: 0.3,
    });
    spec.noise_sd = 1.0;
    spec
}

fn ridge_reproduction() -> Outcome {
    let spec = ridge_spec();
    let (ds, _) = generate_dataset(&spec).map_err(err)?;
    let ridge = ridge_pixels(&spec, 0.5).map_err(err)?;
    check(!ridge.is_empty(), "no ridge pixels")?;
    let run = |method, data_mode| {
        let cfg = CVConfig {
            method,
            data_mode,
            ..Default::default()
        };
        cross_validate(&ds, &cfg)
    };
    let best = run(Method::PerRowMultivariate, DataMode::Normalized).map_err(err)?;
    let base = run(Method::PerPixelLinear, DataMode::Raw).map_err(err)?;
    let diff = rmse_vs_sd_map(&ds, &best).map_err(err)?;
    let below = ridge.iter().filter(|&&(r, c)| diff.get(r, c) > 0.0).count();
    let share = below as f64 / ridge.len() as f64;
    let mean_r2 = |cv: &CVResult| {
        let v: Vec<f64> = cv.r_squared_values().into_iter().filter(|v| v.is_finite()).collect();
        naive_mean(&v)
    };
    let (r2_best, r2_base) = (mean_r2(&best), mean_r2(&base));
    check(
        share >= 0.8,
        format!("RMSE < SD on {below}/{} ridge pixels", ridge.len()),
    )?;
    check(
        r2_best > r2_base,
        format!("mean R² {r2_best:.4} (row, norm) <= {r2_base:.4} (pixel, raw)"),
    )?;
    Ok(format!(
        "RMSE < SD on {below}/{} ridge pixels; mean R² {r2_best:.4} (row, norm) > {r2_base:.4} (pixel, raw)",
        ridge.len()
    ))
}

fn cv_partition() -> Outcome {
    let ids: Vec<u64> = (0..1089).collect();
    for k in [2, 3, 7, 10] {
        let folds = kfold_split(&ids, k, 6).map_err(err)?;
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        check(
            sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1,
            format!("k {k}: sizes {sizes:?}"),
        )?;
        let all: BTreeSet<u64> = folds.iter().flatten().copied().collect();
        check(
            all.len() == ids.len() && sizes.iter().sum::<usize>() == ids.len(),
            format!("k {k}: not a partition"),
        )?;
    }
    let (ds, _) = linear_dataset(83, 1.0, 6);
    for method in Method::ALL {
        for data_mode in DataMode::ALL {
            let cfg = CVConfig {
                method,
                data_mode,
                seed: 17,
                ..Default::default()
            };
            let one = cross_validate(
                &ds,
                &CVConfig {
                    threads: Some(1),
                    ..cfg
                },
            )
            .map_err(err)?;
            let four = cross_validate(
                &ds,
                &CVConfig {
                    threads: Some(4),
                    ..cfg
                },
            )
            .map_err(err)?;
            let mut tested = one.test_ids();
            tested.sort_unstable();
            check(tested == ds.ids(), "held-out ids do not cover the dataset exactly once")?;
            check(
                cv_bits_equal(&one, &four),
                format!("{} {}: 1 vs 4 threads differ", method.label(), data_mode.label()),
            )?;
        }
    }
    Ok(
        "1089 ids partitioned for k in {2, 3, 7, 10}, sizes within 1; 4 variants bit-identical on 1 and 4 threads"
            .into(),
    )
}

fn stats_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let levels = [2.5, 25.0, 50.0, 75.0, 97.5];
    let mut worst = 0.0f64;
    let mut track = |a: f64, b: f64| worst = worst.max((a - b).abs());
    for trial in 0..1000 {
        let n = rng.gen_range(3..25);
        let gen = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..n)
                .map(|_| {
                    if trial % 4 == 0 {
                        rng.gen_range(0..4) as f64
                    } else {
                        rng.gen_range(-5.0..5.0)
                    }
                })
                .collect()
        };
        let (x, y) = (gen(&mut rng), gen(&mut rng));
        if let (Ok(p), Ok(s)) = (pearson(&x, &y), spearman(&x, &y)) {
            let r = pearson_r(&x, &y);
            let rho = pearson_r(&ranks(&x), &ranks(&y));
            track(p.coefficient, r);
            track(p.p_value, t_test_p_from_sums(&x, &y));
            track(s.coefficient, rho);
            track(s.p_value, t_test_p_from_sums(&ranks(&x), &ranks(&y)));
        }
        let st = summarize(&x, &levels).map_err(err)?;
        track(st.mean, naive_mean(&x));
        track(st.sd, naive_sample_sd(&x));
        track(st.min, naive_quantile(&x, 0.0));
        track(st.max, naive_quantile(&x, 100.0));
        for l in levels {
            track(st.quantile(l).ok_or("missing level")?, naive_quantile(&x, l));
        }
        let e: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        track(rmse(&e), naive_rmse(&e));
        if let Ok(r2) = r_squared(&x, &y) {
            track(r2, naive_r_squared(&x, &y));
        }
    }
    check(worst <= 1e-10, format!("max deviation {worst:.2e}"))?;

    let trials = 1000;
    let mut covered = 0;
    for _ in 0..trials {
        let u: Vec<f64> = (0..100).map(|_| rng.gen::<f64>()).collect();
        let band = ecdf_band(&u, 0.05).map_err(err)?;
        covered += usize::from(band.contains_cdf(|x| x.clamp(0.0, 1.0)));
    }
    let coverage = covered as f64 / trials as f64;
    check(coverage >= 0.93, format!("band coverage {coverage:.3}"))?;
    Ok(format!(
        "1000 vectors, max deviation {worst:.1e}; band coverage {:.1} %",
        100.0 * coverage
    ))
}

fn report_structure() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(err)?;
    let mut samples = Vec::new();
    for (tissue, seed, offset) in [(Tissue::adipose(), 31, 0), (Tissue::muscle(), 32, 10_000)] {
        let (ds, _) = linear_dataset(250, 2.0, seed);
        samples.extend(ds.samples().iter().cloned().map(|mut s| {
            s.id += offset;
            s.tissue = tissue.clone();
            s
        }));
    }
    let ds = Dataset::new(Axes::default(), samples).map_err(err)?;
    let input = dir.path().join("samples.ndjson");
    write_ndjson(&ds, File::create(&input).map_err(err)?).map_err(err)?;
    let out = dir.path().join("cv");
    let args = [
        "dms-drift",
        "cv",
        "--input",
        input.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ];
    let code = main_with_args(args);
    check(code == 0, format!("cv exited with {code}"))?;

    let json: serde_json::Value =
        serde_json::from_reader(File::open(out.join("r2_summary.json")).map_err(err)?).map_err(err)?;
    let rows = json["training"].as_array().ok_or("no training rows")?;
    let mut expected_keys: Vec<&str> = vec!["tissue", "regression", "data"];
    expected_keys.extend(R2_COLUMNS);
    expected_keys.sort_unstable();
    let combos = ["linear", "multivariate"]
        .iter()
        .flat_map(|m| ["raw", "norm"].map(move |d| (*m, d)))
        .collect::<Vec<_>>();
    for tissue in ["adipose", "muscle"] {
        let mine: Vec<&serde_json::Value> = rows.iter().filter(|r| r["tissue"] == tissue).collect();
        check(mine.len() == 4, format!("{tissue}: {} rows", mine.len()))?;
        for (method, data) in &combos {
            let label = if *method == "linear" {
                "per_pixel_linear"
            } else {
                "per_row_multivariate"
            };
            let data_key = if *data == "raw" { "raw" } else { "normalized" };
            let row = mine
                .iter()
                .find(|r| r["regression"] == label && r["data"] == data_key)
                .ok_or(format!("{tissue}: no {method}/{data} row"))?;
            let obj = row.as_object().ok_or("row is not an object")?;
            let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            keys.sort_unstable();
            check(
                keys == expected_keys,
                format!("{tissue} {method}/{data}: columns {keys:?}"),
            )?;
            check(
                R2_COLUMNS.iter().all(|c| obj[*c].as_f64().is_some_and(f64::is_finite)),
                "non-finite statistic",
            )?;
            for file in ["rmse_map.csv", "rmse_vs_sd.csv"] {
                let path = out.join(tissue).join(format!("{method}_{data}")).join(file);
                check(path.exists(), format!("missing {}", path.display()))?;
            }
        }
    }
    Ok(format!("2 tissues x 4 variants, columns: {}", R2_COLUMNS.join(", ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("axis fidelity", axis_fidelity, Duration::from_secs(1)),
        (
            "normalization round trip",
            normalization_round_trip,
            Duration::from_secs(1),
        ),
        (
            "row/pixel/normal-equation equivalence",
            oracle_equivalence,
            Duration::from_secs(10),
        ),
        ("noise recovery", noise_recovery, Duration::from_secs(30)),
        (
            "ridge: RMSE below SD, normalized row models best",
            ridge_reproduction,
            Duration::from_secs(60),
        ),
        ("CV partition and determinism", cv_partition, Duration::from_secs(5)),
        (
            "statistics oracles and band coverage",
            stats_oracles,
            Duration::from_secs(30),
        ),
        ("R² summary table structure", report_structure, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; took {elapsed:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("[PASS] {}: {name} - {msg} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {}: {name} - {msg} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
