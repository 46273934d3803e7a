//! Write a synthetic dataset as NDJSON and long-form CSV, read both back and
//! show how lenient ingestion reports a broken record.

use dms_drift::prelude::*;

fn main() -> Result<(), Error> {
    let spec = SynthSpec::new(AxesDef::default(), 5, 1);
    let (ds, _) = generate_dataset(&spec)?;

    let mut ndjson = Vec::new();
    write_ndjson(&ds, &mut ndjson)?;
    let mut csv = Vec::new();
    write_csv(&ds, &mut csv)?;
    println!("ndjson: {} bytes, csv: {} bytes", ndjson.len(), csv.len());

    let back = ingest_samples(&ndjson[..], Format::Ndjson, &IngestOptions::default())?;
    assert_eq!(back.dataset, ds);
    let opts = IngestOptions {
        axes: Some(Axes::default()),
        ..Default::default()
    };
    let back = ingest_samples(&csv[..], Format::Csv, &opts)?;
    assert_eq!(back.dataset, ds);
    println!("both formats round-trip {} samples exactly", ds.len());

    // Drop one SV row from the third record.
    let text = String::from_utf8(ndjson).expect("utf8");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut rec: serde_json::Value = serde_json::from_str(&lines[3]).expect("json");
    rec["responses"].as_array_mut().expect("rows").pop();
    lines[3] = rec.to_string();
    let broken = lines.join("\n");

    match ingest_samples(broken.as_bytes(), Format::Ndjson, &IngestOptions::default()) {
        Err(e) => println!("strict: {e}"),
        Ok(_) => unreachable!("strict mode accepts a short plot"),
    }
    let lenient = IngestOptions {
        strictness: Strictness::Lenient,
        ..Default::default()
    };
    let report = ingest_samples(broken.as_bytes(), Format::Ndjson, &lenient)?;
    println!(
        "lenient: kept {}, skipped {}",
        report.dataset.len(),
        report.skipped.len()
    );
    for e in &report.skipped {
        println!("  {e}");
    }
    Ok(())
}
