//! Command-line front end: argument parsing, dispatch, reports and exit codes.

mod eals;
mod graded;
mod osp;
mod report;
mod repn;
mod roots;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use sha2::{Digest, Sha256};

pub use report::{Check, InputHash, Report};

use crate::eals::EalsError;
use crate::exactalg::{AlgError, Scope};
use crate::graded::GradedError;
use crate::osp::OspError;
use crate::repn::RepnError;
use crate::roots::RootError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "superroot", version, about = "Build and certify orthosymplectic superalgebras, root supersystems and their graded and affine relatives")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit the JSON report to PATH, or to stdout when PATH is omitted or `-`.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    pub json: Option<String>,
    /// Seed for every sampled sweep.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree window for Laurent-type data.
    #[arg(long, global = true, value_name = "K")]
    pub window: Option<i64>,
    /// Check every basis triple.
    #[arg(long, global = true, conflicts_with = "sampled")]
    pub exhaustive: bool,
    /// Check K random basis triples.
    #[arg(long, global = true, value_name = "K")]
    pub sampled: Option<u64>,
    /// Add wall-clock timing to the report (the report is then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Global {
    fn scope(&self, default: Scope) -> Scope {
        match (self.exhaustive, self.sampled) {
            (true, _) => Scope::Exhaustive,
            (false, Some(k)) => Scope::Sampled(k),
            (false, None) => default,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root systems and supersystems.
    Roots {
        #[command(subcommand)]
        cmd: roots::RootsCmd,
    },
    /// The algebra osp(2m+1|2n) and its modules s and u.
    Osp {
        #[command(subcommand)]
        cmd: osp::OspCmd,
    },
    /// Module decomposition and hom spaces.
    Repn {
        #[command(subcommand)]
        cmd: repn::RepnCmd,
    },
    /// Root-graded algebras built from coordinate data.
    Graded {
        #[command(subcommand)]
        cmd: graded::GradedCmd,
    },
    /// Extended affine axioms, affinization and cores.
    Eals {
        #[command(subcommand)]
        cmd: eals::EalsCmd,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("cannot write {path}: {msg}")]
    Output { path: String, msg: String },
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error(transparent)]
    Repn(#[from] RepnError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Eals(#[from] EalsError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

fn alg_is_math(e: &AlgError) -> bool {
    matches!(e, AlgError::NotClosed { .. } | AlgError::Dependent)
}

fn osp_is_math(e: &OspError) -> bool {
    match e {
        OspError::Rank { .. } | OspError::SubPair { .. } => false,
        OspError::Alg(a) => alg_is_math(a),
        _ => true,
    }
}

impl CliError {
    /// Whether the error certifies a mathematical failure rather than bad input.
    pub fn is_math(&self) -> bool {
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::Output { .. } | CliError::Roots(_) => false,
            CliError::Alg(e) => alg_is_math(e),
            CliError::Osp(e) => osp_is_math(e),
            CliError::Repn(e) => match e {
                RepnError::NotDiagonalizable(_) | RepnError::OutsidePsi(_) | RepnError::ModelHighestWeight(_) => true,
                RepnError::Osp(o) => osp_is_math(o),
                RepnError::Alg(a) => alg_is_math(a),
                _ => false,
            },
            CliError::Graded(e) => graded_is_math(e),
            CliError::Eals(e) => match e {
                EalsError::Shape(_) => false,
                EalsError::Graded(g) => graded_is_math(g),
                EalsError::Osp(o) => osp_is_math(o),
                EalsError::Alg(a) => alg_is_math(a),
                _ => true,
            },
        }
    }
}

fn graded_is_math(e: &GradedError) -> bool {
    match e {
        GradedError::Axioms(_) | GradedError::EscapesSubspace(_) | GradedError::Parity(_) => true,
        GradedError::Alg(a) => alg_is_math(a),
        GradedError::Osp(o) => osp_is_math(o),
        _ => false,
    }
}

/// State shared by one command: flags, hashed inputs and the report under construction.
pub struct Session {
    pub global: Global,
    report: Report,
    started: Instant,
}

impl Session {
    fn new(global: Global, command: String) -> Self {
        let report = Report::new(command, global.seed);
        Session { global, report, started: Instant::now() }
    }

    /// Reads a file and records its SHA-256.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })?;
        self.report.inputs.push(InputHash {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(bytes)
    }

    /// Reads and parses a JSON file; syntax errors carry line and column.
    pub fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
    }

    pub fn check(&mut self, c: Check) {
        self.report.checks.push(c);
    }

    pub fn result(&mut self, key: &str, value: impl serde::Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.report.result.insert(key.to_string(), v);
    }
}

/// Writes a JSON artifact (pretty, trailing newline).
pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Output { path: path.display().to_string(), msg: e.to_string() })
}

/// The argument list without the report destination and timing flags, so that
/// reports written to different files compare equal.
fn echo(args: &[String]) -> String {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1).peekable();
    while let Some(a) = it.next() {
        if a == "--json" {
            if it.peek().is_some_and(|n| !n.starts_with('-') || n.as_str() == "-") {
                it.next();
            }
            continue;
        }
        if a.starts_with("--json=") || a == "--timing" {
            continue;
        }
        out.push(a.clone());
    }
    out.join(" ")
}

fn dispatch(cmd: Command, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        Command::Roots { cmd } => roots::run(cmd, s),
        Command::Osp { cmd } => osp::run(cmd, s),
        Command::Repn { cmd } => repn::run(cmd, s),
        Command::Graded { cmd } => graded::run(cmd, s),
        Command::Eals { cmd } => eals::run(cmd, s),
    }
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn say(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn emit(report: &Report, dest: Option<&str>) -> Result<(), CliError> {
    match dest {
        None => {
            say(&report.render_text());
            Ok(())
        }
        Some("-") => {
            say(&format!("{}\n", report.render_json()));
            Ok(())
        }
        Some(path) => {
            let mut text = report.render_json();
            text.push('\n');
            std::fs::write(path, text).map_err(|e| CliError::Output { path: path.into(), msg: e.to_string() })?;
            say(&report.render_text());
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and prints the report.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let text: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let global = cli.global.clone();
    let mut session = Session::new(global.clone(), echo(&text));
    let outcome = dispatch(cli.command, &mut session);
    let Session { mut report, started, .. } = session;
    if let Err(e) = outcome {
        if !e.is_math() {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        report.checks.push(Check::fail("computation", vec![e.to_string()]));
    }
    if global.timing {
        report.timing_ms = Some(started.elapsed().as_millis());
    }
    report.finish();
    if let Err(e) = emit(&report, global.json.as_deref()) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub(crate) fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
