//! Reading and writing sample files.
//!
//! NDJSON: line 1 is an axes header object
//! `{cv_start, cv_stop, cv_steps, sv_start, sv_stop, sv_steps}`; every further
//! non-blank line is one sample
//! `{id, tissue, t_meas, t_fet, h_abs, responses, matrix_id?}` where
//! `responses` is `sv_steps` arrays of `cv_steps` numbers (pA).
//!
//! CSV: long form, one pixel per row, with columns
//! `id,tissue,t_meas,t_fet,h_abs,sv_index,cv_index,response` and an optional
//! trailing `matrix_id`. Axes come from a sidecar JSON file (same object as
//! the NDJSON header) or from the caller.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::axes::{Axes, AxesDef};
use crate::dataset::{Dataset, DispersionPlot, EnvConditions, Sample, Tissue};
use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Ndjson,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ndjson" | "jsonl" => Ok(Format::Ndjson),
            "csv" => Ok(Format::Csv),
            other => Err(Error::validation(format!("unknown sample format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Any invalid record fails the whole ingestion.
    #[default]
    Strict,
    /// Invalid records are skipped and reported.
    Lenient,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub strictness: Strictness,
    /// Required for CSV. For NDJSON, when given, must agree with the header.
    pub axes: Option<Axes>,
}

#[derive(Debug)]
pub struct IngestReport {
    pub dataset: Dataset,
    /// Record-level errors that were skipped in lenient mode.
    pub skipped: Vec<Error>,
}

impl IngestReport {
    pub fn counts(&self) -> BTreeMap<Tissue, usize> {
        self.dataset.tissue_counts()
    }
}

pub fn ingest_samples<R: Read>(source: R, format: Format, opts: &IngestOptions) -> Result<IngestReport> {
    match format {
        Format::Ndjson => read_ndjson(std::io::BufReader::new(source), opts),
        Format::Csv => read_csv(source, opts),
    }
}

/// Reads an axes definition object (the NDJSON header / CSV sidecar).
pub fn read_axes_json<R: Read>(source: R) -> Result<Axes> {
    let def: AxesDef = serde_json::from_reader(source)?;
    Axes::new(def)
}

#[derive(Deserialize)]
struct NdjsonRecord {
    id: Option<u64>,
    tissue: Option<String>,
    t_meas: Option<f64>,
    t_fet: Option<f64>,
    h_abs: Option<f64>,
    responses: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    matrix_id: Option<String>,
}

#[derive(Serialize)]
struct NdjsonRecordOut<'a> {
    id: u64,
    tissue: &'a str,
    t_meas: f64,
    t_fet: f64,
    h_abs: f64,
    responses: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix_id: Option<&'a str>,
}

fn missing(field: &str) -> String {
    format!("missing field {field}")
}

fn build_env(
    t_meas: Option<f64>,
    t_fet: Option<f64>,
    h_abs: Option<f64>,
) -> std::result::Result<EnvConditions, String> {
    let t_meas = t_meas.ok_or_else(|| missing("t_meas"))?;
    let t_fet = t_fet.ok_or_else(|| missing("t_fet"))?;
    let h_abs = h_abs.ok_or_else(|| missing("h_abs"))?;
    EnvConditions::new(t_meas, t_fet, h_abs).map_err(|e| strip_prefix(&e))
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Validation(m) => m.clone(),
        other => other.to_string(),
    }
}

fn ndjson_sample(rec: NdjsonRecord, axes: &Axes) -> std::result::Result<Sample, String> {
    let id = rec.id.ok_or_else(|| missing("id"))?;
    let tissue = rec.tissue.ok_or_else(|| missing("tissue"))?;
    let env = build_env(rec.t_meas, rec.t_fet, rec.h_abs)?;
    let rows = rec.responses.ok_or_else(|| missing("responses"))?;
    let (want_rows, want_cols) = axes.shape();
    if rows.len() != want_rows {
        return Err(format!("row count {} ≠ {want_rows}", rows.len()));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != want_cols {
            return Err(format!("column count {} ≠ {want_cols} in row {r}", row.len()));
        }
    }
    let grid = Grid::from_rows(&rows).map_err(|e| strip_prefix(&e))?;
    let plot = DispersionPlot::new(grid).map_err(|e| strip_prefix(&e))?;
    Ok(Sample {
        id,
        tissue: Tissue(tissue),
        plot,
        env,
        matrix_id: rec.matrix_id,
    })
}

fn resolve_axes(header: Axes, supplied: Option<&Axes>) -> Result<Axes> {
    match supplied {
        Some(a) if a != &header => Err(Error::validation(format!(
            "file header axes {:?} disagree with supplied axes {:?}",
            header.def(),
            a.def()
        ))),
        _ => Ok(header),
    }
}

/// Collects samples, enforcing id uniqueness and the strictness policy.
struct Collector {
    strictness: Strictness,
    samples: Vec<Sample>,
    ids: HashSet<u64>,
    skipped: Vec<Error>,
}

impl Collector {
    fn new(strictness: Strictness) -> Self {
        Collector {
            strictness,
            samples: Vec::new(),
            ids: HashSet::new(),
            skipped: Vec::new(),
        }
    }

    fn push(&mut self, record: usize, line: usize, parsed: std::result::Result<Sample, String>) -> Result<()> {
        let parsed = parsed.and_then(|s| {
            if self.ids.contains(&s.id) {
                Err(format!("duplicate id {}", s.id))
            } else {
                Ok(s)
            }
        });
        match parsed {
            Ok(s) => {
                self.ids.insert(s.id);
                self.samples.push(s);
                Ok(())
            }
            Err(message) => {
                let err = Error::Record { record, line, message };
                match self.strictness {
                    Strictness::Strict => Err(err),
                    Strictness::Lenient => {
                        log::warn!("skipping invalid record: {err}");
                        self.skipped.push(err);
                        Ok(())
                    }
                }
            }
        }
    }

    fn finish(self, axes: Axes) -> Result<IngestReport> {
        Ok(IngestReport {
            dataset: Dataset::new(axes, self.samples)?,
            skipped: self.skipped,
        })
    }
}

fn read_ndjson<R: BufRead>(source: R, opts: &IngestOptions) -> Result<IngestReport> {
    let mut lines = source.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(Error::validation("empty NDJSON input: missing axes header")),
        }
    };
    let def: AxesDef =
        serde_json::from_str(&header).map_err(|e| Error::validation(format!("invalid axes header on line 1: {e}")))?;
    let axes = resolve_axes(Axes::new(def)?, opts.axes.as_ref())?;

    let mut collector = Collector::new(opts.strictness);
    let mut record = 0;
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        record += 1;
        let parsed = serde_json::from_str::<NdjsonRecord>(&line)
            .map_err(|e| format!("malformed JSON ({e})"))
            .and_then(|rec| ndjson_sample(rec, &axes));
        collector.push(record, idx + 1, parsed)?;
    }
    collector.finish(axes)
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    id: Option<u64>,
    tissue: Option<String>,
    t_meas: Option<f64>,
    t_fet: Option<f64>,
    h_abs: Option<f64>,
    sv_index: Option<usize>,
    cv_index: Option<usize>,
    response: Option<f64>,
    #[serde(default)]
    matrix_id: Option<String>,
}

struct CsvGroup {
    first_record: usize,
    rows: Vec<(usize, CsvRow)>,
}

fn csv_sample(id: u64, group: &CsvGroup, axes: &Axes) -> std::result::Result<Sample, String> {
    let (_, head) = &group.rows[0];
    let tissue = head.tissue.clone().ok_or_else(|| missing("tissue"))?;
    let env = build_env(head.t_meas, head.t_fet, head.h_abs)?;
    let (n_rows, n_cols) = axes.shape();
    let mut grid = Grid::zeros(n_rows, n_cols);
    let mut filled = vec![false; n_rows * n_cols];
    for (rec, row) in &group.rows {
        if row.tissue.as_deref() != Some(tissue.as_str())
            || row.t_meas != head.t_meas
            || row.t_fet != head.t_fet
            || row.h_abs != head.h_abs
            || row.matrix_id != head.matrix_id
        {
            return Err(format!("sample {id} has inconsistent metadata (record {rec})"));
        }
        let sv = row.sv_index.ok_or_else(|| missing("sv_index"))?;
        let cv = row.cv_index.ok_or_else(|| missing("cv_index"))?;
        let value = row.response.ok_or_else(|| missing("response"))?;
        if sv >= n_rows {
            return Err(format!("sv_index {sv} out of range (sv_steps {n_rows})"));
        }
        if cv >= n_cols {
            return Err(format!("cv_index {cv} out of range (cv_steps {n_cols})"));
        }
        if !value.is_finite() {
            return Err(format!("non-finite response at sv {sv}, cv {cv}"));
        }
        let k = sv * n_cols + cv;
        if filled[k] {
            return Err(format!("duplicate pixel (sv {sv}, cv {cv}) for sample {id}"));
        }
        filled[k] = true;
        grid.set(sv, cv, value);
    }
    let have = filled.iter().filter(|&&f| f).count();
    if have != filled.len() {
        return Err(format!("sample {id} has {have} of {} pixels", filled.len()));
    }
    Ok(Sample {
        id,
        tissue: Tissue(tissue),
        plot: DispersionPlot::new(grid).map_err(|e| strip_prefix(&e))?,
        env,
        matrix_id: head.matrix_id.clone(),
    })
}

fn read_csv<R: Read>(source: R, opts: &IngestOptions) -> Result<IngestReport> {
    let axes = opts
        .axes
        .clone()
        .ok_or_else(|| Error::validation("CSV input requires an axes definition"))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let mut collector = Collector::new(opts.strictness);

    let mut order: Vec<u64> = Vec::new();
    let mut groups: HashMap<u64, CsvGroup> = HashMap::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        let record = i + 1;
        let line = record + 1;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                collector.push(record, line, Err(format!("malformed row ({e})")))?;
                continue;
            }
        };
        let Some(id) = row.id else {
            collector.push(record, line, Err(missing("id")))?;
            continue;
        };
        groups
            .entry(id)
            .or_insert_with(|| {
                order.push(id);
                CsvGroup {
                    first_record: record,
                    rows: Vec::new(),
                }
            })
            .rows
            .push((record, row));
    }
    for id in order {
        let group = &groups[&id];
        let parsed = csv_sample(id, group, &axes);
        collector.push(group.first_record, group.first_record + 1, parsed)?;
    }
    collector.finish(axes)
}

pub fn write_ndjson<W: Write>(ds: &Dataset, mut out: W) -> Result<()> {
    serde_json::to_writer(&mut out, &ds.axes().def())?;
    out.write_all(b"\n")?;
    for s in ds.samples() {
        let rec = NdjsonRecordOut {
            id: s.id,
            tissue: s.tissue.as_str(),
            t_meas: s.env.t_meas,
            t_fet: s.env.t_fet,
            h_abs: s.env.h_abs,
            responses: s.plot.responses().to_rows(),
            matrix_id: s.matrix_id.as_deref(),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(ds: &Dataset, out: W) -> Result<()> {
    let with_matrix = ds.samples().iter().any(|s| s.matrix_id.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "id", "tissue", "t_meas", "t_fet", "h_abs", "sv_index", "cv_index", "response",
    ];
    if with_matrix {
        header.push("matrix_id");
    }
    w.write_record(&header)?;
    let (rows, cols) = ds.axes().shape();
    for s in ds.samples() {
        for r in 0..rows {
            for c in 0..cols {
                let mut rec = vec![
                    s.id.to_string(),
                    s.tissue.to_string(),
                    s.env.t_meas.to_string(),
                    s.env.t_fet.to_string(),
                    s.env.h_abs.to_string(),
                    r.to_string(),
                    c.to_string(),
                    s.plot.get(r, c).to_string(),
                ];
                if with_matrix {
                    rec.push(s.matrix_id.clone().unwrap_or_default());
                }
                w.write_record(&rec)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
