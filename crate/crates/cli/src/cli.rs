//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ergotime::rational::{self, Rational};
use ergotime::scalars::set_refinement_cap;
use serde_json::json;

use crate::commands::{
    cmd_analyze, cmd_approx, cmd_circle, cmd_ergodize, cmd_psi, rotation_from_arg, rotation_from_spec,
    vector_source, Report, VectorSource,
};
use crate::spec::{SweepSpec, VectorSpec};
use crate::verify::{rows_to_csv, run_sweep, summarize};
use crate::{CliError, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "ergotime", version, about = "Resonance and ergodization times of linear flows on tori")]
pub struct Cli {
    /// Output format (default: json, or csv for `verify`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Precision budget in bits for certified sign decisions.
    #[arg(long, global = true, env = "ERGOTIME_PRECISION_BITS")]
    pub precision_bits: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct VectorArgs {
    /// Vector-spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Built-in vector: sqrt2, golden, sqrt2-sqrt3, cbrt2, sqrt2-sum, half, sqrt3.
    #[arg(long)]
    pub vector: Option<String>,
}

impl VectorArgs {
    fn source(&self) -> Result<VectorSource, CliError> {
        vector_source(self.spec.as_deref(), self.vector.as_deref())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resonance lattice, its rank and constants.
    Analyze(VectorArgs),
    /// The resonance profile at Q with its witness.
    Psi {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long = "Q")]
        q: String,
    },
    /// Bracket for the delta-ergodization time, with the explicit bound.
    Ergodize {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Periodic approximations forming a basis of the lattice, certified.
    Approx {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long = "Q")]
        q: String,
    },
    /// Steps for a circle rotation to become delta-dense, against the bound.
    Circle {
        /// Built-in vector name (fractional part of its second entry) or a rational.
        #[arg(long, conflicts_with = "spec")]
        alpha: Option<String>,
        /// Two-entry vector-spec file; the angle is the fractional part of b/a.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        delta: String,
    },
    /// Runs a sweep of theorem-backed checks.
    Verify {
        #[arg(long)]
        sweep: PathBuf,
    },
}

fn num(flag: &str, s: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(|_| CliError::Input(format!("--{flag} {s:?} is not a rational number")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(report: &Report, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => format!("{:#}\n", report.to_json()),
        Format::Csv => report.to_csv()?,
    })
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    if let Some(bits) = cli.precision_bits {
        if bits == 0 {
            return Err(CliError::Input("precision budget must be positive".into()));
        }
        set_refinement_cap(bits);
    }
    let out = cli.out.as_deref();
    let report = match &cli.command {
        Command::Analyze(v) => cmd_analyze(&v.source()?)?,
        Command::Psi { vector, q } => cmd_psi(&vector.source()?, &num("Q", q)?)?,
        Command::Ergodize {
            vector,
            delta,
            tol,
            epsilon,
        } => cmd_ergodize(
            &vector.source()?,
            &num("delta", delta)?,
            tol.as_deref().map(|t| num("tol", t)).transpose()?,
            epsilon.as_deref().map(|e| num("epsilon", e)).transpose()?,
        )?,
        Command::Approx { vector, q } => cmd_approx(&vector.source()?, &num("Q", q)?)?,
        Command::Circle { alpha, spec, delta } => {
            let (rot, label) = match (alpha, spec) {
                (Some(a), None) => (rotation_from_arg(a)?, a.clone()),
                (None, Some(p)) => {
                    let s = VectorSpec::load(p)?;
                    (rotation_from_spec(&s)?, s.name)
                }
                _ => return Err(CliError::Input("give --alpha or --spec".into())),
            };
            cmd_circle(&rot, &label, &num("delta", delta)?)?
        }
        Command::Verify { sweep } => {
            let text = fs::read_to_string(sweep)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", sweep.display())))?;
            let base = sweep.parent().unwrap_or(Path::new("."));
            let resolved = SweepSpec::from_json(&text)?.resolve(base)?;
            let rows = run_sweep(&resolved);
            let summary = summarize(&rows);
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => rows_to_csv(&rows)?,
                Format::Json => format!("{:#}\n", json!({ "rows": rows, "summary": summary })),
            };
            emit(out, &text)?;
            eprintln!("{summary}");
            return Ok(if summary.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
    };
    emit(out, &render(&report, cli.format.unwrap_or(Format::Json))?)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
