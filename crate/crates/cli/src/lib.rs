//! `mpgw` command line: runs the experiments and writes JSON, CSV and
//! Markdown artifacts into an output directory.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error
//! (missing, unreadable or malformed input, or an unwritable output
//! directory), 3 numerical failure.

pub mod render;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpgw_core::eval::{load_dataset, run_report, DataSummary, ExperimentConfig, OutputFormat, Sections};
use mpgw_core::ingest::{self, REFERENCE_ROWS, REFERENCE_SHA256};
use mpgw_core::Error;

pub use render::OutputFile;

pub const DATA_ENV: &str = "MPGW_DATA";

#[derive(Debug, Parser)]
#[command(name = "mpgw", version, about = "Auto MPG classical-ML workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlation matrix, feature histograms and pair-plot data.
    Eda(RunArgs),
    /// Seven-model regression comparison with diagnostics.
    Regress(RunArgs),
    /// Classification grid, ROC series and class-wise summaries.
    Classify(RunArgs),
    /// Everything above in one report.
    Report(RunArgs),
    /// Check a data file and print a summary.
    ValidateData(DataArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Data file in auto-mpg.data format (falls back to $MPGW_DATA).
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Training fraction in (0, 1).
    #[arg(long)]
    split: Option<f64>,
    /// mpg at or above this is class 1.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Flat TOML file with ExperimentConfig keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    All,
    Json,
    Csv,
    Markdown,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::All => OutputFormat::All,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Markdown => OutputFormat::Markdown,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{}", m.trim_end()),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

fn from_core(e: Error, path: &Path) -> CliError {
    if e.is_data_error() {
        CliError::Data(format!("{}: {e}", path.display()))
    } else {
        CliError::Numerical(e.to_string())
    }
}

/// Result of a successful invocation: the message for stdout and the files
/// written.
#[derive(Debug)]
pub struct Outcome {
    pub message: String,
    pub written: Vec<PathBuf>,
}

fn resolve_data(flag: Option<PathBuf>, from_config: Option<&str>) -> Result<PathBuf, CliError> {
    flag.or_else(|| from_config.map(PathBuf::from))
        .or_else(|| std::env::var_os(DATA_ENV).map(PathBuf::from))
        .ok_or_else(|| {
            CliError::Usage(format!(
                "no data file: pass --data, set data_path in --config, or set {DATA_ENV}"
            ))
        })
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, CliError> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

fn build_config(args: &RunArgs) -> Result<(ExperimentConfig, PathBuf), CliError> {
    let mut config = load_config(args.config.as_deref())?;
    let data = resolve_data(args.data.data.clone(), config.data_path.as_deref())?;
    config.data_path = Some(data.display().to_string());
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.split {
        config.split_ratio = v;
    }
    if let Some(v) = args.threshold {
        config.threshold_mpg = v;
    }
    if let Some(v) = args.folds {
        config.cv_folds = v;
    }
    if let Some(v) = args.format {
        config.format = v.into();
    }
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((config, data))
}

/// Computes everything in memory first so a failure leaves no partial output.
fn run_experiment(args: RunArgs, sections: Sections, stem: &str) -> Result<Outcome, CliError> {
    let (config, data) = build_config(&args)?;
    let (dataset, summary) = load_dataset(&data, config.threshold_mpg).map_err(|e| from_core(e, &data))?;
    let report = run_report(&dataset, summary, &config, sections).map_err(|e| from_core(e, &data))?;
    let files = render::render(&report, stem, config.format);
    let written = write_files(&args.out, &files)?;
    Ok(Outcome {
        message: format!("{stem}: wrote {} file(s) to {}", written.len(), args.out.display()),
        written,
    })
}

fn write_files(out: &Path, files: &[OutputFile]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Data(format!("cannot create {}: {e}", out.display())))?;
    files
        .iter()
        .map(|f| {
            let path = out.join(&f.name);
            std::fs::write(&path, &f.contents)
                .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}

fn validate_data(args: DataArgs) -> Result<Outcome, CliError> {
    let path = resolve_data(args.data, None)?;
    let (table, sha) = ingest::read_auto_mpg(&path).map_err(|e| from_core(e, &path))?;
    let missing: Vec<usize> = table.missing_horsepower_rows().iter().map(|i| i + 1).collect();
    let (_, summary): (_, DataSummary) =
        load_dataset(&path, ingest::DEFAULT_THRESHOLD_MPG).map_err(|e| from_core(e, &path))?;
    let mut message = format!(
        "{}: {} rows, 9 fields each\nmissing horsepower ('?') at data line(s): {}\nhorsepower median {}\nrows with mpg >= {}: {}\nsha256 {}{}",
        path.display(),
        table.len(),
        if missing.is_empty() {
            "none".to_string()
        } else {
            missing.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
        },
        summary.horsepower_median,
        ingest::DEFAULT_THRESHOLD_MPG,
        summary.n_positive,
        sha,
        if sha == REFERENCE_SHA256 {
            " (matches the bundled reference file)"
        } else {
            " (differs from the bundled reference file)"
        }
    );
    if table.len() != REFERENCE_ROWS {
        return Err(CliError::Data(format!(
            "{}: expected {REFERENCE_ROWS} rows, found {}",
            path.display(),
            table.len()
        )));
    }
    message += "\nok";
    Ok(Outcome {
        message,
        written: Vec::new(),
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Usage(String::new()),
        _ => CliError::Usage(e.to_string()),
    })?;
    match cli.command {
        Command::Eda(a) => run_experiment(
            a,
            Sections {
                eda: true,
                regression: false,
                classification: false,
            },
            "eda",
        ),
        Command::Regress(a) => run_experiment(
            a,
            Sections {
                eda: false,
                regression: true,
                classification: false,
            },
            "regression",
        ),
        Command::Classify(a) => run_experiment(
            a,
            Sections {
                eda: false,
                regression: false,
                classification: true,
            },
            "classification",
        ),
        Command::Report(a) => run_experiment(a, Sections::ALL, "report"),
        Command::ValidateData(a) => validate_data(a),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // help and version are printed by clap itself and exit 0
    if let Err(e) = Cli::try_parse_from(&args) {
        if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ) {
            let _ = e.print();
            return 0;
        }
    }
    match execute(args) {
        Ok(outcome) => {
            println!("{}", outcome.message);
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
