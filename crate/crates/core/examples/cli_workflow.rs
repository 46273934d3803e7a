//! The command-line workflow driven in-process: synthesize, fit, predict and
//! cross-validate inside a temporary directory.

use dms_drift::cli::main_with_args;

fn run(args: &[&str]) {
    println!("$ dms-drift {}", args.join(" "));
    let code = main_with_args(std::iter::once("dms-drift").chain(args.iter().copied()));
    println!("  -> exit {code}");
}

fn main() -> std::io::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::write(
        path("spec.json"),
        r#"{"n_samples": 120, "seed": 3, "noise_sd": 1.5, "ridge": {
            "base_cv": [1.0, 1.1, 1.2, 1.4, 1.6, 1.9, 2.2, 2.6, 3.0, 3.4, 3.9, 4.4],
            "humidity_shift": 1.0, "amplitude": 60.0, "width": 0.4}}"#,
    )?;

    run(&["synth", "-c", &path("spec.json"), "-o", &path("samples.ndjson")]);
    run(&["env-stats", "-i", &path("samples.ndjson"), "--format", "csv"]);
    run(&["fit", "-i", &path("samples.ndjson"), "--method", "row", "--data-mode", "norm", "-o", &path("model.json")]);
    // a normalized model needs row extremes for de-normalization
    run(&["predict", "-m", &path("model.json"), "--t-meas", "28", "--t-fet", "45", "--h-abs", "2.2"]);
    run(&[
        "predict", "-m", &path("model.json"), "--t-meas", "28", "--t-fet", "45", "--h-abs", "2.2",
        "--denorm", "train-mean", "-o", &path("pred.csv"),
    ]);
    run(&["cv", "-i", &path("samples.ndjson"), "--out-dir", &path("cv"), "--k", "5", "--seed", "1"]);

    let mut files: Vec<String> = walk(&dir.path().join("cv"))?;
    files.sort();
    println!("cv outputs:");
    for f in files {
        println!("  {f}");
    }
    Ok(())
}

fn walk(root: &std::path::Path) -> std::io::Result<Vec<String>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(root)? {
        let p = entry?.path();
        if p.is_dir() {
            out.extend(walk(&p)?);
        } else {
            out.push(p.to_string_lossy().rsplit("cv/").next().unwrap_or_default().to_string());
        }
    }
    Ok(out)
}
