//! The `etale` command line: runs pipelines on problem files and writes
//! certificates, and re-checks certificates independently.
//!
//! Exit codes: 0 success, 1 certificate violations, 2 parse errors,
//! 3 unsupported input, 4 pipeline failure.

pub mod codec;
pub mod problem;
pub mod produce;
pub mod verify;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{AlgebraError, ParseError};
use crate::standardize::Mode;
use problem::{BaseSpec, Problem, ProblemFile};

pub const FORMAT: &str = "etale-certificate";
pub const VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_PIPELINE: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(m: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: m.into() }
    }

    pub fn unsupported(m: impl Into<String>) -> Self {
        CliError { code: EXIT_UNSUPPORTED, message: m.into() }
    }

    pub fn pipeline(m: impl Into<String>) -> Self {
        CliError { code: EXIT_PIPELINE, message: m.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<crate::poly::PolyError> for CliError {
    fn from(e: crate::poly::PolyError) -> Self {
        AlgebraError::from(e).into()
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Unsupported(_) => CliError::unsupported(e.to_string()),
            _ => CliError::pipeline(e.to_string()),
        }
    }
}

/// SHA-256 of the compact serialization without the `digest` field. Object
/// keys are sorted, so the serialization is canonical.
pub fn digest(cert: &Value) -> String {
    let mut body = cert.clone();
    if let Some(m) = body.as_object_mut() {
        m.remove("digest");
    }
    let bytes = serde_json::to_vec(&body).expect("JSON values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn seal(cert: &mut Value) {
    let d = digest(cert);
    cert["digest"] = Value::String(d);
}

#[derive(Debug, Parser)]
#[command(name = "etale", version, about = "Certified standard etale presentations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Input {
    /// Problem file (JSON); `-` reads standard input.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Base ring in short form, e.g. `Zloc:5`, `Fp:7`, `Q`, `Z`, `kt:3`, `ktloc:3:t`.
    #[arg(long)]
    pub base: Option<String>,
    /// A variable name; repeat for several.
    #[arg(long = "var")]
    pub vars: Vec<String>,
    /// A relation such as `x^2 - 2`; repeat for several.
    #[arg(long = "relation")]
    pub relations: Vec<String>,
    /// An element to invert.
    #[arg(long)]
    pub invert: Option<String>,
    /// Inverse of the Jacobian determinant, in the variables and `z = 1/invert`.
    #[arg(long)]
    pub jacobian_witness: Option<String>,
    /// Where to write the certificate; standard output by default.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standard etale presentations over a local base.
    Standardize {
        /// Local mode (the default).
        #[arg(long)]
        local: bool,
        /// Only unramified: emit the surjections from standard algebras.
        #[arg(long, conflicts_with = "flat_unramified")]
        unramified: bool,
        /// Flat and unramified input, split through the flatness witness.
        #[arg(long)]
        flat_unramified: bool,
        #[command(flatten)]
        input: Input,
    },
    /// A comaximal cover over a global base.
    Cover {
        /// Global mode (the default).
        #[arg(long)]
        global: bool,
        /// Also push every presentation down to the base ring.
        #[arg(long)]
        over_r: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Split the residual algebra into monogene separable components.
    DecomposeResidual {
        #[command(flatten)]
        input: Input,
    },
    /// Built-in examples.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Re-check a certificate file; `-` reads standard input.
    Verify { cert: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// The cover of `Z[X]/(1 - t X)`.
    Basic {
        #[arg(long, default_value_t = 5)]
        t: i64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
    }
}

impl Input {
    /// The problem from the file, with any inline flags overriding it.
    pub fn problem(&self) -> Result<Problem, CliError> {
        let mut file = match &self.input {
            Some(p) => {
                let text = read_source(p)?;
                serde_json::from_str::<ProblemFile>(&text).map_err(|e| CliError::parse(format!("problem file: {e}")))?
            }
            None => ProblemFile::default(),
        };
        if !self.vars.is_empty() {
            file.vars = self.vars.clone();
        }
        if !self.relations.is_empty() {
            file.relations = self.relations.clone();
        }
        if self.invert.is_some() {
            file.invert = self.invert.clone();
        }
        if self.jacobian_witness.is_some() {
            file.jacobian_witness = self.jacobian_witness.clone();
        }
        let base = match &self.base {
            Some(b) => BaseSpec::from_flag(b)?,
            None if file.base.is_null() => return Err(CliError::parse("no base ring given")),
            None => BaseSpec::from_json(&file.base)?,
        };
        file.base = base.to_json();
        Problem::from_file(file)
    }
}

/// Producer output is checked before it is written.
fn self_checked(cert: Value) -> Result<Value, CliError> {
    let report = verify::verify(&cert);
    if !report.ok() {
        let first = &report.violations[0];
        return Err(CliError::pipeline(format!("self-check failed at {}: {}", first.path, first.message)));
    }
    Ok(cert)
}

pub fn standardize(problem: &Problem, mode: Mode) -> Result<Value, CliError> {
    let cert = crate::with_local_base!(&problem.base, |r| produce::local(&r, problem, mode))?;
    self_checked(cert)
}

pub fn cover(problem: &Problem, over_r: bool) -> Result<Value, CliError> {
    let cert = crate::with_global_base!(&problem.base, |b| produce::global(&b, problem, over_r))?;
    self_checked(cert)
}

pub fn decompose_residual(problem: &Problem) -> Result<Value, CliError> {
    let cert = crate::with_local_base!(&problem.base, |r| produce::residual(&r, problem))?;
    self_checked(cert)
}

pub fn demo_basic(t: i64) -> Result<Value, CliError> {
    cover(&produce::demo_basic(t), false)
}

fn write_json(v: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::pipeline(format!("{}: {e}", p.display()))),
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let (cert, out) = match cli.command {
        Command::Standardize { unramified, flat_unramified, input, .. } => {
            let mode = if unramified {
                Mode::Unramified
            } else if flat_unramified {
                Mode::FlatUnramified
            } else {
                Mode::Etale
            };
            (standardize(&input.problem()?, mode)?, input.output)
        }
        Command::Cover { over_r, input, .. } => (cover(&input.problem()?, over_r)?, input.output),
        Command::DecomposeResidual { input } => (decompose_residual(&input.problem()?)?, input.output),
        Command::Demo { which: Demo::Basic { t, output } } => (demo_basic(t)?, output),
        Command::Verify { cert } => {
            let text = read_source(&cert)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::parse(format!("certificate: {e}")))?;
            let report = verify::verify(&v);
            write_json(&report.to_json(), None)?;
            return Ok(if report.ok() { EXIT_OK } else { EXIT_VIOLATIONS });
        }
    };
    write_json(&cert, out.as_deref())?;
    Ok(EXIT_OK)
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
