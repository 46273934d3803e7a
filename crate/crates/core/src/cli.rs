//! `dms-drift` command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 input or validation error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::axes::Axes;
use crate::dataset::{split_by_tissue, Dataset, EnvConditions, EnvField, Tissue};
use crate::diagnostics::{self, EnvSummary};
use crate::error::{Error, Result};
use crate::evaluate::report::{read_map_csv, write_map_csv, R2Summary};
use crate::evaluate::{cross_validate, rmse_vs_sd_map, CVConfig, CVResult, DenormMode};
use crate::ingest::{self, Format, IngestOptions, IngestReport, Strictness};
use crate::normalize::RowStats;
use crate::regress::{self, DataMode, FitOptions, Method, PlotModel};
use crate::synth::{self, SynthSpec};

#[derive(Debug, Parser)]
#[command(
    name = "dms-drift",
    version,
    about = "Temperature/humidity regression for DMS dispersion plots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a sample file and report counts per tissue.
    Ingest(IngestArgs),
    /// Min / 2.5 % / median / 97.5 % / max of the environment, per tissue and pooled.
    EnvStats(EnvStatsArgs),
    /// Correlations, ECDF bands, trend slopes and mean/SD maps.
    Diagnose(DiagnoseArgs),
    /// Fit a plot model and save it as JSON.
    Fit(FitArgs),
    /// K-fold cross-validation with RMSE maps and an R² summary table.
    Cv(CvArgs),
    /// Predict a dispersion plot for given conditions.
    Predict(PredictArgs),
    /// Generate a synthetic dataset from a JSON spec.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleFormat {
    Ndjson,
    Csv,
}

impl From<SampleFormat> for Format {
    fn from(f: SampleFormat) -> Self {
        match f {
            SampleFormat::Ndjson => Format::Ndjson,
            SampleFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Pixel,
    Row,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Pixel => Method::PerPixelLinear,
            MethodArg::Row => Method::PerRowMultivariate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Pixel,
    Row,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataModeArg {
    Raw,
    Norm,
}

impl From<DataModeArg> for DataMode {
    fn from(m: DataModeArg) -> Self {
        match m {
            DataModeArg::Raw => DataMode::Raw,
            DataModeArg::Norm => DataMode::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataModeChoice {
    Raw,
    Norm,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DenormArg {
    Paper,
    TrainMean,
}

impl From<DenormArg> for DenormMode {
    fn from(d: DenormArg) -> Self {
        match d {
            DenormArg::Paper => DenormMode::MeasuredTarget,
            DenormArg::TrainMean => DenormMode::TrainMean,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Sample file (NDJSON or long-form CSV).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    pub input_format: Option<SampleFormat>,
    /// Axes definition JSON (required for CSV input).
    #[arg(long)]
    pub axes: Option<PathBuf>,
    /// Fail on the first invalid record (default).
    #[arg(long, conflicts_with = "lenient")]
    pub strict: bool,
    /// Skip invalid records with a warning.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "pixel")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "raw")]
    pub data_mode: DataModeArg,
    /// Fit an intercept term (default).
    #[arg(long, overrides_with = "no_intercept")]
    pub intercept: bool,
    /// Fit without intercept.
    #[arg(long = "no-intercept")]
    pub no_intercept: bool,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Re-emit the validated dataset here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ndjson")]
    pub output_format: SampleFormat,
}

#[derive(Debug, Args)]
pub struct EnvStatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Significance level of the ECDF confidence bands.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Restrict to one tissue label.
    #[arg(long)]
    pub tissue: Option<String>,
    /// Allow fitting a dataset with several tissue labels.
    #[arg(long)]
    pub allow_mixed: bool,
    /// Record the current time in the model metadata.
    #[arg(long)]
    pub stamp: bool,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodChoice,
    #[arg(long, value_enum, default_value = "all")]
    pub data_mode: DataModeChoice,
    #[arg(long, overrides_with = "no_intercept")]
    pub intercept: bool,
    #[arg(long = "no-intercept")]
    pub no_intercept: bool,
    /// De-normalization source for normalized models (default: paper).
    #[arg(long, value_enum)]
    pub denorm: Option<DenormArg>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub tissue: Option<String>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write the summary table as CSV.
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, short)]
    pub model: PathBuf,
    #[arg(long)]
    pub t_meas: f64,
    #[arg(long)]
    pub t_fet: f64,
    #[arg(long)]
    pub h_abs: f64,
    /// Measured plot (map CSV) whose row extremes de-normalize the prediction.
    #[arg(long)]
    pub stats_from: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub denorm: Option<DenormArg>,
    /// Output map CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator spec JSON.
    #[arg(long, short)]
    pub config: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "ndjson")]
    pub format: SampleFormat,
    /// Also write the noise-free plots (NDJSON).
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => cmd_ingest(&a),
        Command::EnvStats(a) => cmd_env_stats(&a),
        Command::Diagnose(a) => cmd_diagnose(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Cv(a) => cmd_cv(&a),
        Command::Predict(a) => cmd_predict(&a),
        Command::Synth(a) => cmd_synth(&a),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::validation(format!("cannot open {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn sample_format(path: &Path, explicit: Option<SampleFormat>) -> Format {
    match explicit {
        Some(f) => f.into(),
        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        None => Format::Ndjson,
    }
}

pub fn load_input(a: &InputArgs) -> Result<IngestReport> {
    let axes = match &a.axes {
        Some(p) => Some(ingest::read_axes_json(open(p)?)?),
        None => None,
    };
    let opts = IngestOptions {
        strictness: if a.lenient {
            Strictness::Lenient
        } else {
            Strictness::Strict
        },
        axes,
    };
    let report = ingest::ingest_samples(open(&a.input)?, sample_format(&a.input, a.input_format), &opts)?;
    for e in &report.skipped {
        eprintln!("warning: skipped {e}");
    }
    Ok(report)
}

fn select_tissue(ds: Dataset, tissue: &Option<String>) -> Result<Dataset> {
    match tissue {
        None => Ok(ds),
        Some(t) => {
            let sub = ds.filter(|s| s.tissue.as_str() == t);
            if sub.is_empty() {
                return Err(Error::validation(format!("no samples with tissue '{t}'")));
            }
            Ok(sub)
        }
    }
}

#[derive(Serialize)]
struct IngestOutput {
    n_samples: usize,
    counts: BTreeMap<Tissue, usize>,
    skipped: Vec<String>,
}

fn cmd_ingest(a: &IngestArgs) -> Result<()> {
    let report = load_input(&a.input)?;
    if let Some(out) = &a.output {
        let w = create(out)?;
        match a.output_format {
            SampleFormat::Ndjson => ingest::write_ndjson(&report.dataset, w)?,
            SampleFormat::Csv => {
                ingest::write_csv(&report.dataset, w)?;
                write_json(&out.with_extension("axes.json"), &report.dataset.axes().def())?;
            }
        }
    }
    let summary = IngestOutput {
        n_samples: report.dataset.len(),
        counts: report.counts(),
        skipped: report.skipped.iter().map(ToString::to_string).collect(),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

/// Env summaries for every tissue followed by the pooled dataset.
fn env_groups(ds: &Dataset) -> Result<Vec<(String, EnvSummary)>> {
    let mut groups = Vec::new();
    for (t, part) in split_by_tissue(ds) {
        groups.push((t.0, diagnostics::env_summary(&part)?));
    }
    groups.push(("pooled".to_string(), diagnostics::env_summary(ds)?));
    Ok(groups)
}

fn env_stats_csv(groups: &[(String, EnvSummary)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["group", "n", "factor", "min", "q2.5", "median", "q97.5", "max"])?;
    for (g, s) in groups {
        for (f, st) in &s.fields {
            let q = |l| st.quantile(l).unwrap_or(f64::NAN).to_string();
            w.write_record([
                g.clone(),
                st.n.to_string(),
                f.name().to_string(),
                st.min.to_string(),
                q(2.5),
                q(50.0),
                q(97.5),
                st.max.to_string(),
            ])?;
        }
    }
    w.into_inner().map_err(|e| Error::Internal(e.to_string()))
}

pub fn cmd_env_stats(a: &EnvStatsArgs) -> Result<()> {
    let ds = load_input(&a.input)?.dataset;
    let groups = env_groups(&ds)?;
    let bytes = match a.format {
        ReportFormat::Json => {
            let map: BTreeMap<&str, &EnvSummary> = groups.iter().map(|(g, s)| (g.as_str(), s)).collect();
            let mut v = serde_json::to_vec_pretty(&map)?;
            v.push(b'\n');
            v
        }
        ReportFormat::Csv => env_stats_csv(&groups)?,
    };
    match &a.output {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(&bytes)?;
            w.flush()?;
        }
        None => io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct EcdfExport<'a> {
    tissue: &'a str,
    field: EnvField,
    band: &'a diagnostics::EcdfBand,
}

fn cmd_diagnose(a: &DiagnoseArgs) -> Result<()> {
    let ds = load_input(&a.input)?.dataset;
    if ds.is_empty() {
        return Err(Error::validation("dataset is empty"));
    }
    let out = &a.out_dir;
    fs::create_dir_all(out)?;

    let mut correlations = BTreeMap::new();
    correlations.insert("pooled".to_string(), diagnostics::env_correlations(&ds)?);
    let parts = split_by_tissue(&ds);
    for (t, part) in &parts {
        correlations.insert(t.0.clone(), diagnostics::env_correlations(part)?);
    }
    write_json(&out.join("correlations.json"), &correlations)?;

    let groups = env_groups(&ds)?;
    match a.format {
        ReportFormat::Json => {
            let map: BTreeMap<&str, &EnvSummary> = groups.iter().map(|(g, s)| (g.as_str(), s)).collect();
            write_json(&out.join("env_summary.json"), &map)?;
        }
        ReportFormat::Csv => fs::write(out.join("env_summary.csv"), env_stats_csv(&groups)?)?,
    }

    let mut trend_rows = Vec::new();
    let mut bands = Vec::new();
    for (t, part) in &parts {
        let h: Vec<f64> = part.samples().iter().map(|s| s.env.h_abs).collect();
        bands.push((t.0.clone(), diagnostics::ecdf_band(&h, a.alpha)?));
        trend_rows.extend(diagnostics::trend_summary(part, &EnvField::ALL)?);
        if part.len() >= 2 {
            let maps = diagnostics::mean_sd_maps(part)?;
            let axes = part.axes();
            write_map_csv(&maps.mean, axes, create(&out.join(format!("{t}_mean.csv")))?)?;
            write_map_csv(&maps.sd, axes, create(&out.join(format!("{t}_sd.csv")))?)?;
            write_map_csv(
                &maps.mean_minus_3sd,
                axes,
                create(&out.join(format!("{t}_mean_minus_3sd.csv")))?,
            )?;
        }
    }
    let exports: Vec<EcdfExport> = bands
        .iter()
        .map(|(t, b)| EcdfExport {
            tissue: t,
            field: EnvField::HAbs,
            band: b,
        })
        .collect();
    write_json(&out.join("ecdf_h_abs.json"), &exports)?;
    for (t, b) in &bands {
        let mut w = csv::Writer::from_writer(create(&out.join(format!("{t}_ecdf_h_abs.csv")))?);
        w.write_record(["h_abs", "ecdf", "lower", "upper"])?;
        for i in 0..b.sorted_values.len() {
            w.write_record([
                b.sorted_values[i].to_string(),
                b.cdf_levels[i].to_string(),
                b.lower[i].to_string(),
                b.upper[i].to_string(),
            ])?;
        }
        w.flush()?;
    }
    match a.format {
        ReportFormat::Json => write_json(&out.join("trends.json"), &trend_rows)?,
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(create(&out.join("trends.csv"))?);
            w.write_record(["tissue", "sort_key", "q2.5", "median", "q97.5"])?;
            for r in &trend_rows {
                w.write_record([
                    r.tissue.to_string(),
                    r.sort_key.to_string(),
                    r.q2_5.to_string(),
                    r.median.to_string(),
                    r.q97_5.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    println!("wrote diagnostics to {}", out.display());
    Ok(())
}

fn intercept_flag(intercept: bool, no_intercept: bool) -> bool {
    intercept || !no_intercept
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let ds = select_tissue(load_input(&a.input)?.dataset, &a.tissue)?;
    let opts = FitOptions {
        method: a.model.method.into(),
        data_mode: a.model.data_mode.into(),
        intercept: intercept_flag(a.model.intercept, a.model.no_intercept),
        allow_mixed: a.allow_mixed,
    };
    let mut model = regress::fit_plot_model(&ds, &opts)?;
    if a.stamp {
        model.metadata.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    let mut w = create(&a.output)?;
    w.write_all(model.to_json()?.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    println!(
        "fitted {} / {} model for {} on {} samples ({} rank-deficient fits)",
        model.method.label(),
        model.data_mode.label(),
        model.tissue,
        ds.len(),
        model.metadata.rank_deficient_fits
    );
    Ok(())
}

/// Resolves the (method, data mode) grid and checks flag consistency.
pub fn cv_combinations(a: &CvArgs) -> Result<Vec<(Method, DataMode)>> {
    let methods: Vec<Method> = match a.method {
        MethodChoice::Pixel => vec![Method::PerPixelLinear],
        MethodChoice::Row => vec![Method::PerRowMultivariate],
        MethodChoice::All => Method::ALL.to_vec(),
    };
    let modes: Vec<DataMode> = match a.data_mode {
        DataModeChoice::Raw => vec![DataMode::Raw],
        DataModeChoice::Norm => vec![DataMode::Normalized],
        DataModeChoice::All => DataMode::ALL.to_vec(),
    };
    if a.denorm.is_some() && !modes.contains(&DataMode::Normalized) {
        return Err(Error::validation(
            "--denorm requires normalized data (--data-mode norm or all)",
        ));
    }
    Ok(methods
        .iter()
        .flat_map(|&m| modes.iter().map(move |&d| (m, d)))
        .collect())
}

pub fn cmd_cv(a: &CvArgs) -> Result<()> {
    let combos = cv_combinations(a)?;
    let ds = select_tissue(load_input(&a.input)?.dataset, &a.tissue)?;
    let out = &a.out_dir;
    fs::create_dir_all(out)?;

    let mut results: Vec<CVResult> = Vec::new();
    for (tissue, part) in split_by_tissue(&ds) {
        for &(method, data_mode) in &combos {
            let cfg = CVConfig {
                k: a.k,
                seed: a.seed,
                method,
                data_mode,
                intercept: intercept_flag(a.intercept, a.no_intercept),
                denorm_mode: a.denorm.map_or(DenormMode::MeasuredTarget, Into::into),
                threads: a.threads,
            };
            let cv = cross_validate(&part, &cfg)?;
            let dir = out
                .join(tissue.as_str())
                .join(format!("{}_{}", method.label(), data_mode.label()));
            fs::create_dir_all(&dir)?;
            write_map_csv(&cv.rmse_map, part.axes(), create(&dir.join("rmse_map.csv"))?)?;
            let diff = rmse_vs_sd_map(&part, &cv)?;
            write_map_csv(&diff, part.axes(), create(&dir.join("rmse_vs_sd.csv"))?)?;
            write_json(&dir.join("cv_summary.json"), &cv.summary()?)?;
            results.push(cv);
        }
    }
    let summary = R2Summary::from_results(&results)?;
    write_json(&out.join("r2_summary.json"), &summary)?;
    if a.format == ReportFormat::Csv {
        let mut w = csv::Writer::from_writer(create(&out.join("r2_summary.csv"))?);
        w.write_record([
            "tissue",
            "regression",
            "data",
            "mean",
            "sd",
            "q2.5",
            "q25",
            "median",
            "q75",
            "q97.5",
        ])?;
        for row in &summary.training {
            let mut rec = vec![
                row.tissue.to_string(),
                row.regression.label().to_string(),
                row.data.label().to_string(),
            ];
            rec.extend(row.values().iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    print!("{}", summary.to_table());
    Ok(())
}

pub fn cmd_predict(a: &PredictArgs) -> Result<()> {
    let text = fs::read_to_string(&a.model)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", a.model.display())))?;
    let model = PlotModel::from_json(&text)?;
    let env = EnvConditions::new(a.t_meas, a.t_fet, a.h_abs)?;

    let measured: Option<RowStats> = match &a.stats_from {
        Some(p) => {
            let grid = read_map_csv(open(p)?)?;
            if grid.shape() != model.axes.shape() {
                return Err(Error::validation("--stats-from plot does not match the model axes"));
            }
            Some(RowStats::of(&grid))
        }
        None => None,
    };
    if model.data_mode == DataMode::Normalized {
        match (a.denorm, &measured) {
            (Some(DenormArg::TrainMean), Some(_)) => {
                return Err(Error::validation("--denorm train-mean conflicts with --stats-from"))
            }
            (Some(DenormArg::TrainMean), None) if model.fallback_stats.is_none() => {
                return Err(Error::validation("model carries no training-mean row stats"))
            }
            (None | Some(DenormArg::Paper), None) => {
                return Err(Error::validation(
                    "normalized model needs --stats-from <measured plot> or --denorm train-mean",
                ))
            }
            _ => {}
        }
    }
    let plot = regress::predict_plot(&model, &env, measured.as_ref())?;
    match &a.output {
        Some(p) => write_map_csv(plot.responses(), &model.axes, create(p)?)?,
        None => write_map_csv(plot.responses(), &model.axes, io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let spec: SynthSpec = serde_json::from_reader(open(&a.config)?)?;
    let (ds, truth) = synth::generate_dataset(&spec)?;
    let w = create(&a.output)?;
    match a.format {
        SampleFormat::Ndjson => ingest::write_ndjson(&ds, w)?,
        SampleFormat::Csv => {
            ingest::write_csv(&ds, w)?;
            write_json(&a.output.with_extension("axes.json"), &ds.axes().def())?;
        }
    }
    if let Some(p) = &a.truth {
        let samples = ds
            .samples()
            .iter()
            .zip(truth.plots)
            .map(|(s, plot)| crate::dataset::Sample { plot, ..s.clone() })
            .collect();
        let truth_ds = Dataset::new(Axes::clone(ds.axes()), samples)?;
        ingest::write_ndjson(&truth_ds, create(p)?)?;
    }
    println!("wrote {} samples to {}", ds.len(), a.output.display());
    Ok(())
}
