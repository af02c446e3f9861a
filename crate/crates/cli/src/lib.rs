//! Command-line front end: instance files, decomposition reports, the
//! verification suite and the built-in example catalog.
//!
//! Exit codes: 0 success, 1 a named check failed, 2 parse or usage error.

pub mod instance;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wittartin_core::catalog;
use wittartin_core::suite::{verify_instance, VerifyOptions};
use wittartin_core::{CheckReport, ProblemInstance};

use instance::{InstanceFile, Loaded};
use report::{build_report, CheckEntry};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid field `{path}`: {msg}")]
    Field { path: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "wittartin", version, about = "Witt-Artin decompositions for subgroup momentum maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an instance file.
    Check { file: PathBuf },
    /// Print the full decomposition report.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include wall-clock time (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Run every named check.
    Verify {
        #[arg(required_unless_present = "all_examples", conflicts_with = "all_examples")]
        file: Option<PathBuf>,
        #[arg(long)]
        all_examples: bool,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a catalog instance as an instance file.
    Example {
        /// One of so3-generic, so3-collinear, so3-zero, torus, so3xso3-diagonal;
        /// `torus(n,k)` is also accepted.
        name: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        subdim: Option<usize>,
    },
}

/// What a command produced. `main` prints `stdout`, then `stderr`, and exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn checked(passed: bool, stdout: String) -> Self {
        Outcome {
            code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &CliError) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Decompose { file, format, timing } => cmd_decompose(&file, format, timing),
        Command::Verify {
            file,
            all_examples,
            samples,
            seed,
        } => {
            let opts = VerifyOptions {
                samples,
                seed,
                float_checks: true,
            };
            match file {
                Some(f) if !all_examples => cmd_verify_file(&f, opts),
                _ => Ok(cmd_verify_examples(opts)),
            }
        }
        Command::Example { name, dim, subdim } => cmd_example(&name, dim, subdim),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    instance::parse(&text)?.to_instance()
}

#[derive(Serialize)]
struct CheckOutput {
    passed: bool,
    checks: Vec<CheckEntry>,
}

fn check_json(rep: &CheckReport) -> String {
    let out = CheckOutput {
        passed: rep.all_passed(),
        checks: report::validation_only(rep),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("serializes");
    s.push('\n');
    s
}

pub fn cmd_check(path: &Path) -> Result<Outcome, CliError> {
    let rep = match load(path)? {
        Loaded::Invalid(rep) => rep,
        Loaded::Instance(inst) => inst.validate(),
    };
    Ok(Outcome::checked(rep.all_passed(), check_json(&rep)))
}

pub fn cmd_decompose(path: &Path, format: Format, timing: bool) -> Result<Outcome, CliError> {
    let inst = match load(path)? {
        Loaded::Invalid(rep) => return Ok(Outcome::checked(false, check_json(&rep))),
        Loaded::Instance(inst) => inst,
    };
    let r = build_report(&inst, VerifyOptions::default(), timing);
    let text = match format {
        Format::Json => r.to_json(),
        Format::Text => r.to_text(),
    };
    Ok(Outcome::checked(r.all_passed(), text))
}

fn verify_lines(name: &str, rep: &CheckReport) -> String {
    let mut out = String::new();
    for c in &rep.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{tag} {name} {}", c.name));
        if let Some(d) = &c.detail {
            out.push_str(&format!(" ({d})"));
        }
        out.push('\n');
    }
    let failed = rep.failures().count();
    out.push_str(&format!("{name}: {} checks, {failed} failed\n", rep.len()));
    out
}

pub fn cmd_verify_file(path: &Path, opts: VerifyOptions) -> Result<Outcome, CliError> {
    let name = path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
    let rep = match load(path)? {
        Loaded::Invalid(rep) => rep,
        Loaded::Instance(inst) => verify_instance(&inst, opts),
    };
    Ok(Outcome::checked(rep.all_passed(), verify_lines(&name, &rep)))
}

/// Runs the catalog concurrently; output order follows the catalog.
pub fn cmd_verify_examples(opts: VerifyOptions) -> Outcome {
    let reports: Vec<(&str, CheckReport)> = std::thread::scope(|s| {
        let handles: Vec<_> = catalog::all()
            .into_iter()
            .map(|(name, inst)| s.spawn(move || (name, verify_instance(&inst, opts))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verify thread panicked")).collect()
    });
    let mut out = String::new();
    let mut failed = 0;
    for (name, rep) in &reports {
        out.push_str(&verify_lines(name, rep));
        failed += rep.failures().count();
    }
    out.push_str(&format!("total: {} instances, {failed} failed checks\n", reports.len()));
    Outcome::checked(failed == 0, out)
}

/// Splits `torus(3,1)` into a name and parameters.
fn parse_example_name(name: &str) -> Result<(String, Option<usize>, Option<usize>), CliError> {
    let Some((base, rest)) = name.split_once('(') else {
        return Ok((name.to_string(), None, None));
    };
    let bad = || CliError::Usage(format!("malformed example name `{name}`"));
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let nums: Vec<usize> = args
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match nums[..] {
        [n, k] => Ok((base.to_string(), Some(n), Some(k))),
        [n] => Ok((base.to_string(), Some(n), None)),
        _ => Err(bad()),
    }
}

pub fn example_instance(name: &str, dim: Option<usize>, subdim: Option<usize>) -> Result<ProblemInstance, CliError> {
    let (base, d, k) = parse_example_name(name)?;
    catalog::by_name(&base, dim.or(d), subdim.or(k)).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_example(name: &str, dim: Option<usize>, subdim: Option<usize>) -> Result<Outcome, CliError> {
    let inst = example_instance(name, dim, subdim)?;
    Ok(Outcome::ok(InstanceFile::from_instance(&inst).to_json()))
}
