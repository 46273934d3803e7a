mod common;

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use common::*;
use dms_drift::cli::main_with_args;
use dms_drift::evaluate::report::read_map_csv;
use dms_drift::prelude::*;
use tempfile::TempDir;

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("dms-drift").chain(args.iter().copied()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn save(ds: &Dataset, dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(name);
    write_ndjson(ds, File::create(&path).unwrap()).unwrap();
    path
}

fn constant_env_dataset(n: usize, envs: &[EnvConditions]) -> Dataset {
    let samples = (0..n)
        .map(|i| Sample {
            id: i as u64,
            tissue: Tissue::muscle(),
            plot: DispersionPlot::new(Grid::filled(12, 40, i as f64)).unwrap(),
            env: envs[i % envs.len()],
            matrix_id: None,
        })
        .collect();
    Dataset::new(Axes::default(), samples).unwrap()
}

fn env_stats_json(input: &Path, dir: &TempDir) -> serde_json::Value {
    let out = dir.path().join("env.json");
    assert_eq!(run(&["env-stats", "-i", p(input), "-o", p(&out)]), 0);
    serde_json::from_reader(File::open(out).unwrap()).unwrap()
}

#[test]
fn env_stats_constant_and_two_sample() {
    let dir = TempDir::new().unwrap();
    let env = EnvConditions::new(27.0, 44.0, 2.1).unwrap();
    let input = save(&constant_env_dataset(5, &[env]), &dir, "const.ndjson");
    let json = env_stats_json(&input, &dir);
    let t = &json["muscle"]["fields"][0][1];
    for key in ["mean", "min", "max"] {
        assert_eq!(t[key], 27.0);
    }
    assert!(t["quantiles"].as_array().unwrap().iter().all(|q| q["value"] == 27.0));
    assert!(json.get("pooled").is_some());

    let envs = [env, EnvConditions::new(25.0, 47.5, 2.6).unwrap()];
    let input = save(&constant_env_dataset(2, &envs), &dir, "two.ndjson");
    let json = env_stats_json(&input, &dir);
    let h = &json["pooled"]["fields"][2][1];
    assert_eq!((h["min"].as_f64(), h["max"].as_f64()), (Some(2.1), Some(2.6)));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let (ds, _) = linear_dataset(3, 0.0, 1);
    let good = save(&ds, &dir, "good.ndjson");
    let text = fs::read_to_string(&good).unwrap().replacen("\"h_abs\"", "\"h_abz\"", 1);
    let bad = dir.path().join("bad.ndjson");
    fs::write(&bad, text).unwrap();
    assert_eq!(run(&["env-stats", "-i", p(&bad)]), 2);
    assert_eq!(run(&["ingest", "-i", p(&bad), "--lenient"]), 0);
    assert_eq!(run(&["ingest", "-i", p(&dir.path().join("missing.ndjson"))]), 2);
    assert_eq!(run(&["ingest", "-i", p(&good), "--strict"]), 0);
}

#[test]
fn ingest_converts_to_csv_and_back() {
    let dir = TempDir::new().unwrap();
    let (ds, _) = linear_dataset(4, 1.0, 2);
    let input = save(&ds, &dir, "d.ndjson");
    let csv = dir.path().join("d.csv");
    assert_eq!(
        run(&["ingest", "-i", p(&input), "-o", p(&csv), "--output-format", "csv"]),
        0
    );
    let axes = dir.path().join("d.axes.json");
    assert!(axes.exists());
    let back = dir.path().join("back.ndjson");
    assert_eq!(run(&["ingest", "-i", p(&csv), "--axes", p(&axes), "-o", p(&back)]), 0);
    assert_eq!(fs::read(&input).unwrap(), fs::read(&back).unwrap());
    // CSV without axes is an input error
    assert_eq!(run(&["ingest", "-i", p(&csv)]), 2);
}

fn r2_summary(dir: &Path) -> serde_json::Value {
    serde_json::from_reader(File::open(dir.join("r2_summary.json")).unwrap()).unwrap()
}

#[test]
fn cv_noise_free_means_are_one() {
    let dir = TempDir::new().unwrap();
    let (ds, _) = linear_dataset(40, 0.0, 3);
    let input = save(&ds, &dir, "d.ndjson");
    let out = dir.path().join("cv");
    assert_eq!(
        run(&[
            "cv",
            "-i",
            p(&input),
            "--out-dir",
            p(&out),
            "--method",
            "all",
            "--data-mode",
            "raw",
            "--k",
            "4"
        ]),
        0
    );
    let json = r2_summary(&out);
    let rows = json["training"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!((row["mean"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn cv_layout_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (a, _) = linear_dataset(30, 1.0, 4);
    let (b, _) = linear_dataset(30, 1.0, 5);
    let mut samples = a.samples().to_vec();
    samples.extend(b.samples().iter().cloned().map(|mut s| {
        s.id += 100;
        s.tissue = Tissue::muscle();
        s
    }));
    let ds = Dataset::new(Axes::default(), samples).unwrap();
    let input = save(&ds, &dir, "d.ndjson");
    let (o1, o2) = (dir.path().join("o1"), dir.path().join("o2"));
    for (out, threads) in [(&o1, "1"), (&o2, "3")] {
        let args = [
            "cv",
            "-i",
            p(&input),
            "--out-dir",
            p(out),
            "--k",
            "5",
            "--seed",
            "9",
            "--threads",
            threads,
            "--format",
            "csv",
        ];
        assert_eq!(run(&args), 0);
    }
    let json = r2_summary(&o1);
    let rows = json["training"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for tissue in ["adipose", "muscle"] {
        assert_eq!(rows.iter().filter(|r| r["tissue"] == tissue).count(), 4);
        for combo in ["linear_raw", "linear_norm", "multivariate_raw", "multivariate_norm"] {
            for file in ["rmse_map.csv", "rmse_vs_sd.csv", "cv_summary.json"] {
                let a = fs::read(o1.join(tissue).join(combo).join(file)).unwrap();
                let b = fs::read(o2.join(tissue).join(combo).join(file)).unwrap();
                assert_eq!(a, b, "{tissue}/{combo}/{file}");
            }
        }
    }
    assert_eq!(
        fs::read(o1.join("r2_summary.json")).unwrap(),
        fs::read(o2.join("r2_summary.json")).unwrap()
    );
    let header = fs::read_to_string(o1.join("r2_summary.csv")).unwrap();
    assert!(header.starts_with("tissue,regression,data,mean,sd,q2.5,q25,median,q75,q97.5\n"));
    assert_eq!(
        run(&[
            "cv",
            "-i",
            p(&input),
            "--out-dir",
            p(&o1),
            "--data-mode",
            "raw",
            "--denorm",
            "train-mean"
        ]),
        2
    );
    assert_eq!(run(&["cv", "-i", p(&input), "--out-dir", p(&o1), "--k", "1"]), 2);
}

#[test]
fn predict_zero_model_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let zero = generate_dataset(&SynthSpec::new(AxesDef::default(), 20, 6)).unwrap().0;
    let input = save(&zero, &dir, "zero.ndjson");
    let model = dir.path().join("zero.json");
    assert_eq!(run(&["fit", "-i", p(&input), "-o", p(&model)]), 0);
    let out = dir.path().join("pred.csv");
    assert_eq!(
        run(&[
            "predict",
            "-m",
            p(&model),
            "--t-meas",
            "27",
            "--t-fet",
            "45",
            "--h-abs",
            "2",
            "-o",
            p(&out)
        ]),
        0
    );
    let grid = read_map_csv(File::open(&out).unwrap()).unwrap();
    assert_eq!(grid.shape(), (12, 40));
    assert!(grid.as_slice().iter().all(|v| *v == 0.0));

    let (ds, _) = linear_dataset(50, 0.0, 7);
    let input = save(&ds, &dir, "d.ndjson");
    let model = dir.path().join("m.json");
    assert_eq!(run(&["fit", "-i", p(&input), "--method", "row", "-o", p(&model)]), 0);
    let s = &ds.samples()[3];
    let e = s.env;
    let (tm, tf, h) = (e.t_meas.to_string(), e.t_fet.to_string(), e.h_abs.to_string());
    assert_eq!(
        run(&[
            "predict",
            "-m",
            p(&model),
            "--t-meas",
            &tm,
            "--t-fet",
            &tf,
            "--h-abs",
            &h,
            "-o",
            p(&out)
        ]),
        0
    );
    let from_file = read_map_csv(File::open(&out).unwrap()).unwrap();
    let opts = FitOptions {
        method: Method::PerRowMultivariate,
        ..Default::default()
    };
    let in_memory = predict_plot(&fit_plot_model(&ds, &opts).unwrap(), &e, None).unwrap();
    assert_eq!(&from_file, in_memory.responses());
    assert!(from_file.sub(s.plot.responses()).max_abs() < 1e-6);
}

#[test]
fn predict_normalized_needs_stats() {
    let dir = TempDir::new().unwrap();
    let (ds, _) = linear_dataset(40, 0.5, 8);
    let input = save(&ds, &dir, "d.ndjson");
    let model = dir.path().join("m.json");
    assert_eq!(
        run(&[
            "fit",
            "-i",
            p(&input),
            "--data-mode",
            "norm",
            "--stamp",
            "-o",
            p(&model)
        ]),
        0
    );
    let meta: serde_json::Value = serde_json::from_reader(File::open(&model).unwrap()).unwrap();
    assert!(meta["metadata"]["timestamp"].as_u64().is_some());

    let env = ["--t-meas", "27", "--t-fet", "45", "--h-abs", "2.2"];
    let out = dir.path().join("p.csv");
    let base = ["predict", "-m", p(&model), "-o", p(&out)];
    assert_eq!(run(&[&base[..], &env[..]].concat()), 2);
    assert_eq!(run(&[&base[..], &env[..], &["--denorm", "paper"]].concat()), 2);
    assert_eq!(run(&[&base[..], &env[..], &["--denorm", "train-mean"]].concat()), 0);

    let measured = dir.path().join("measured.csv");
    dms_drift::evaluate::report::write_map_csv(
        ds.samples()[0].plot.responses(),
        ds.axes(),
        File::create(&measured).unwrap(),
    )
    .unwrap();
    assert_eq!(run(&[&base[..], &env[..], &["--stats-from", p(&measured)]].concat()), 0);
    let pred = read_map_csv(File::open(&out).unwrap()).unwrap();
    let stats = RowStats::of(ds.samples()[0].plot.responses());
    let opts = FitOptions {
        data_mode: DataMode::Normalized,
        ..Default::default()
    };
    let env = EnvConditions::new(27.0, 45.0, 2.2).unwrap();
    let expected = predict_plot(&fit_plot_model(&ds, &opts).unwrap(), &env, Some(&stats)).unwrap();
    assert_eq!(&pred, expected.responses());
}

#[test]
fn synth_and_diagnose() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("spec.json");
    fs::write(&config, r#"{"n_samples": 30, "seed": 4, "noise_sd": 1.0}"#).unwrap();
    let data = dir.path().join("s.ndjson");
    let truth = dir.path().join("t.ndjson");
    assert_eq!(
        run(&["synth", "-c", p(&config), "-o", p(&data), "--truth", p(&truth)]),
        0
    );
    let a = ingest_samples(File::open(&data).unwrap(), Format::Ndjson, &IngestOptions::default())
        .unwrap()
        .dataset;
    let t = ingest_samples(File::open(&truth).unwrap(), Format::Ndjson, &IngestOptions::default())
        .unwrap()
        .dataset;
    assert_eq!(a.len(), 30);
    assert_eq!(a.envs(), t.envs());

    let out = dir.path().join("diag");
    assert_eq!(
        run(&["diagnose", "-i", p(&data), "--out-dir", p(&out), "--format", "csv"]),
        0
    );
    for f in [
        "correlations.json",
        "env_summary.csv",
        "trends.csv",
        "ecdf_h_abs.json",
        "adipose_ecdf_h_abs.csv",
        "adipose_mean.csv",
        "adipose_sd.csv",
        "adipose_mean_minus_3sd.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let sd = read_map_csv(File::open(out.join("adipose_sd.csv")).unwrap()).unwrap();
    assert!(sd.as_slice().iter().all(|v| *v > 0.3 && *v < 2.0));

    fs::write(&config, r#"{"n_samples": 0}"#).unwrap();
    assert_eq!(run(&["synth", "-c", p(&config), "-o", p(&data)]), 2);
}
