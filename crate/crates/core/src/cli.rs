//! Command-line front end.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use crate::detector::{CoefficientSet, DetectError, DetectOptions, Detector};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::free_algebra::{parse_presentation_as, ParseError, Presentation};
use crate::report::RunReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;

/// Decide whether an algebra has infinitely many semisimple representations of a given dimension.
#[derive(Debug, Parser)]
#[command(name = "repfinite", version)]
pub struct Args {
    /// Presentation file, or `-` for standard input.
    #[arg(long)]
    pub input: PathBuf,
    /// Matrix dimension; overrides the file.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Ground field, `q` or `f<p>`; overrides the file.
    #[arg(long)]
    pub field: Option<String>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Test every coefficient instead of stopping at the first witness.
    #[arg(long)]
    pub all: bool,
    /// Use every word and coefficient without merging rotations.
    #[arg(long)]
    pub no_cyclic_dedup: bool,
    /// Worker threads for the per-coefficient tests.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Per-coefficient log on stdout, engine trace on stderr.
    #[arg(long)]
    pub verbose: bool,
    /// Report zero for all timings, making repeated reports identical.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(ParseError),
    #[error("{0}")]
    Semantic(String),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(e) if e.is_syntax() => EXIT_PARSE,
            _ => EXIT_SEMANTIC,
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run_cli<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&args) {
        Ok(report) => {
            let text = if args.json {
                report.to_json() + "\n"
            } else {
                report.to_human(args.verbose)
            };
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Reads, parses and decides, returning the report.
pub fn execute(args: &Args) -> Result<RunReport, CliError> {
    let path = args.input.to_string_lossy().to_string();
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Read { path: path.clone(), source })?;
        s
    } else {
        std::fs::read_to_string(&args.input).map_err(|source| CliError::Read { path: path.clone(), source })?
    };
    let field = args
        .field
        .as_deref()
        .map(FieldSpec::parse_flag)
        .transpose()
        .map_err(CliError::Semantic)?;
    let mut presentation = parse_presentation_as(&text, field).map_err(CliError::Parse)?;
    if let Some(n) = args.dim {
        if n == 0 {
            return Err(CliError::Semantic("dimension must be a positive integer".into()));
        }
        presentation.dim = n;
    }
    if args.threads == 0 {
        return Err(CliError::Semantic("thread count must be positive".into()));
    }
    let mut report = match presentation.field {
        FieldSpec::Rationals => decide(&Rationals, &presentation, args)?,
        FieldSpec::PrimeField(p) => {
            let field = PrimeField::new(p).map_err(|e| CliError::Semantic(e.to_string()))?;
            decide(&field, &presentation, args)?
        }
    };
    if args.no_timings {
        report.strip_timings();
    }
    Ok(report)
}

fn decide<F: Field>(field: &F, presentation: &Presentation, args: &Args) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let set = if args.no_cyclic_dedup {
        CoefficientSet::AllWords
    } else {
        CoefficientSet::CyclicClasses
    };
    let options = DetectOptions {
        coefficients: set,
        stop_at_first: !args.all,
        threads: args.threads,
        trace: args.verbose,
        reverse: false,
    };
    let detector = Detector::new(field, presentation, &options)?;
    let candidates = detector
        .candidates(set)
        .map_err(|e| CliError::Detect(e.into()))?;
    let verdict = detector.run(candidates, &options)?;
    Ok(RunReport::from_verdict(
        presentation,
        detector.ring(),
        set,
        &verdict,
        start.elapsed().as_micros() as u64,
    ))
}
