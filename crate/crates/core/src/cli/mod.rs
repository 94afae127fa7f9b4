//! Command-line front end: runs the pipeline for one family and writes a
//! directory of JSON reports plus a text summary.

pub mod checks;
pub mod output;
pub mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::binet::precision::DEFAULT_DIGITS;
use crate::expansion::DEFAULT_FAMILY_CAP;
use crate::families::{builtin, DenomChoice, FamilyError, FamilySpec, BUILTIN_NAMES};

pub use checks::{check_fixtures, FixtureCheck};
pub use pipeline::{run_pipeline, RunOutput};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("stage dependency missing: '{stage}' needs '{needs}'")]
    StageDependency { stage: Stage, needs: Stage },
    #[error("expansion cap exceeded: {0}")]
    CapExceeded(String),
    #[error("{0} fixture check(s) failed")]
    FixtureMismatch(usize),
    #[error("{0} is a stretch fixture; pass --corrugated to run it")]
    StretchDisabled(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{0}")]
    Pipeline(String),
    #[error("writing reports: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownFamily(_) => 3,
            CliError::StageDependency { .. }
            | CliError::BadArgument(_)
            | CliError::StretchDisabled(_) => 2,
            CliError::CapExceeded(_) => 4,
            CliError::FixtureMismatch(_) => 5,
            CliError::Family(_) | CliError::Pipeline(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Expand,
    Reduce,
    Annihilate,
    Minimal,
    Binet,
    Resistance,
    All,
}

pub const PIPELINE: [Stage; 6] = [
    Stage::Expand,
    Stage::Reduce,
    Stage::Annihilate,
    Stage::Minimal,
    Stage::Binet,
    Stage::Resistance,
];

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = self.to_possible_value().expect("no skipped variants");
        f.write_str(s.get_name())
    }
}

/// Expand `all`, sort into pipeline order and reject lists with a gap.
pub fn resolve_stages(requested: &[Stage]) -> Result<Vec<Stage>, CliError> {
    if requested.is_empty() || requested.contains(&Stage::All) {
        return Ok(PIPELINE.to_vec());
    }
    let mut stages: Vec<Stage> = requested.to_vec();
    stages.sort();
    stages.dedup();
    for s in &stages {
        let pos = PIPELINE
            .iter()
            .position(|p| p == s)
            .expect("pipeline stage");
        if let Some(missing) = PIPELINE[..pos].iter().find(|p| !stages.contains(p)) {
            return Err(CliError::StageDependency {
                stage: *s,
                needs: *missing,
            });
        }
    }
    Ok(stages)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum DenomArg {
    First,
    Last,
    #[default]
    Auto,
}

impl DenomArg {
    pub fn resolve(self, spec_default: DenomChoice) -> DenomChoice {
        match self {
            DenomArg::First => DenomChoice::First,
            DenomArg::Last => DenomChoice::Last,
            DenomArg::Auto => spec_default,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "detrec",
    version,
    about = "Linear recursions and resistance distances for Laplacian minor families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run pipeline stages for one family.
    Run(RunArgs),
    /// Run the full pipeline and compare with the bundled reference values.
    Check {
        family: String,
        #[arg(long, env = "DETREC_PRECISION", default_value_t = DEFAULT_DIGITS)]
        precision: usize,
    },
    /// List the built-in families.
    List,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Built-in family name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub family: Option<String>,
    /// JSON family description.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DenomArg::Auto)]
    pub denominator: DenomArg,
    /// Probe size for family comparisons; defaults to the family's own.
    #[arg(long)]
    pub min_size: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_FAMILY_CAP)]
    pub family_cap: usize,
    /// Decimal digits for Binet constants.
    #[arg(long, env = "DETREC_PRECISION", default_value_t = DEFAULT_DIGITS)]
    pub precision: usize,
    /// Format of the summary printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub stages: Vec<Stage>,
    /// Compare against bundled reference values; fail on a mismatch.
    #[arg(long)]
    pub check: bool,
    /// Allow the corrugated 2-tree stretch family.
    #[arg(long)]
    pub corrugated: bool,
    /// Output directory; defaults to `detrec-out/<family>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Subsequence stride for families that are graphs only on a residue class.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Start shifts `NUM,DEN` for Binet constants.
    #[arg(long, value_parser = parse_pair::<i64>)]
    pub shifts: Option<(i64, i64)>,
    /// Largest graph size in the exact resistance table.
    #[arg(long, default_value_t = 30)]
    pub max_size: usize,
    /// Range `LO,HI` of asymptotic resistance differences.
    #[arg(long, value_parser = parse_pair::<i64>, default_value = "40,60")]
    pub difference_range: (i64, i64),
    /// Range `LO,HI` of exact resistance differences.
    #[arg(long, value_parser = parse_pair::<usize>, default_value = "25,40")]
    pub exact_difference_range: (usize, usize),
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got '{s}'"))?;
    let p = |x: &str| {
        x.trim()
            .parse::<T>()
            .map_err(|_| format!("not a number: '{x}'"))
    };
    Ok((p(a)?, p(b)?))
}

/// Resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: String,
    pub spec: FamilySpec,
    pub denominator: DenomArg,
    pub min_size: Option<usize>,
    pub family_cap: usize,
    pub precision: usize,
    pub format: Format,
    pub stages: Vec<Stage>,
    pub check: bool,
    pub out: PathBuf,
    pub stride: Option<usize>,
    pub shifts: Option<(i64, i64)>,
    pub max_size: usize,
    pub difference_range: (i64, i64),
    pub exact_difference_range: (usize, usize),
}

pub fn load_spec(name: &str) -> Result<FamilySpec, CliError> {
    builtin(name).map_err(|e| match e {
        FamilyError::UnknownFamily(n) => CliError::UnknownFamily(n),
        e => CliError::Family(e),
    })
}

impl RunConfig {
    pub fn from_args(a: &RunArgs) -> Result<Self, CliError> {
        let spec = match (&a.family, &a.config) {
            (_, Some(path)) => FamilySpec::load(path)?,
            (Some(name), None) => load_spec(name)?,
            (None, None) => {
                return Err(CliError::BadArgument(
                    "one of --family or --config is required".into(),
                ))
            }
        };
        if spec.name == "corrugated2tree" && !a.corrugated {
            return Err(CliError::StretchDisabled(spec.name));
        }
        if a.family_cap == 0 {
            return Err(CliError::BadArgument(
                "--family-cap must be positive".into(),
            ));
        }
        if a.stride == Some(0) {
            return Err(CliError::BadArgument("--stride must be positive".into()));
        }
        let stages = resolve_stages(&a.stages)?;
        let out = a
            .out
            .clone()
            .unwrap_or_else(|| Path::new("detrec-out").join(&spec.name));
        Ok(RunConfig {
            family: spec.name.clone(),
            spec,
            denominator: a.denominator,
            min_size: a.min_size,
            family_cap: a.family_cap,
            precision: a.precision,
            format: a.format,
            stages,
            check: a.check,
            out,
            stride: a.stride,
            shifts: a.shifts,
            max_size: a.max_size,
            difference_range: a.difference_range,
            exact_difference_range: a.exact_difference_range,
        })
    }

    /// All stages with defaults, writing to `out`.
    pub fn full(family: &str, out: &Path) -> Result<Self, CliError> {
        let out = out
            .to_str()
            .ok_or_else(|| CliError::BadArgument("non-UTF-8 output path".into()))?;
        RunConfig::from_args(&parse_run_args(&[
            "--family",
            family,
            "--corrugated",
            "--out",
            out,
        ])?)
    }
}

#[derive(Parser)]
#[command(name = "run")]
struct RunOnly {
    #[command(flatten)]
    args: RunArgs,
}

/// Parse `run` flags from an argument list without the subcommand name.
pub fn parse_run_args(argv: &[&str]) -> Result<RunArgs, CliError> {
    RunOnly::try_parse_from(std::iter::once("run").chain(argv.iter().copied()))
        .map(|r| r.args)
        .map_err(|e| CliError::BadArgument(e.to_string()))
}

/// Execute a run: pipeline, report files, optional fixture comparison.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let out = run_pipeline(cfg, cfg.spec.clone())?;
    let checks = if cfg.check {
        check_fixtures(&out)
    } else {
        Vec::new()
    };
    output::write_all(cfg, &out, &checks)?;
    match cfg.format {
        Format::Text => print!("{}", output::report_text(cfg, &out, &checks)),
        Format::Json => println!("{}", output::summary_json(cfg, &out, &checks)),
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let failed = checks.iter().filter(|c| !c.pass && !c.soft).count();
    for c in checks.iter().filter(|c| c.is_failure()) {
        eprintln!("fixture mismatch: {}: {}", c.name, c.detail);
    }
    for c in checks.iter().filter(|c| !c.pass && c.soft) {
        eprintln!("warning: soft fixture {} differs: {}", c.name, c.detail);
    }
    if failed > 0 {
        return Err(CliError::FixtureMismatch(failed));
    }
    Ok(out)
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Run(args) => RunConfig::from_args(&args).and_then(|cfg| run(&cfg).map(|_| ())),
        Command::Check { family, precision } => check_command(&family, precision),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn check_command(family: &str, precision: usize) -> Result<(), CliError> {
    let mut cfg = RunConfig::from_args(&parse_run_args(&["--family", family, "--corrugated"])?)?;
    cfg.precision = precision;
    let out = run_pipeline(&cfg, cfg.spec.clone())?;
    let checks = check_fixtures(&out);
    for c in &checks {
        let tag = match (c.pass, c.soft) {
            (true, _) => "ok",
            (false, true) => "warn",
            (false, false) => "FAIL",
        };
        println!("{tag:>4}  {}: {}", c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass && !c.soft).count();
    if failed > 0 {
        Err(CliError::FixtureMismatch(failed))
    } else {
        Ok(())
    }
}
