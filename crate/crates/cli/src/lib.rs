//! Command-line front end: argument grammar, report envelopes and dispatch.

mod commands;
pub mod config;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffcycles::dynsys::{CollatzVariant, SystemMode, DEFAULT_STATE_BUDGET};
use diffcycles::groebner::DEFAULT_N_MAX;
use diffcycles::{AlgebraError, OrderKind};
use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "diffcycles", version, about = "Milnor numbers, differential operators, finite orbits and curve slice counts")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Json)]
    pub output: OutputMode,
    /// Seed for every random choice (only sweeps sample).
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Largest state space an exhaustive enumeration may visit.
    #[arg(long, global = true, env = "DIFFCYCLES_STATE_BUDGET", default_value_t = DEFAULT_STATE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub state_budget: u64,
    /// File of `key = value` lines giving default flag values; flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Comma-separated variable names; inferred from the inputs when absent.
    #[arg(long, global = true, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Milnor number at the origin in characteristic p and 0, split into tame and wild parts.
    Milnor(MilnorArgs),
    /// Reduced Gröbner basis, quotient dimension and membership tests.
    Groebner(GroebnerArgs),
    /// Kernel tests of D∘∂^k on a truncated polynomial module.
    Inertia(InertiaArgs),
    /// Apply a differential operator to a polynomial.
    WeylApply(WeylApplyArgs),
    /// Cycle decomposition of a polynomial self-map or Euler-discretized vector field.
    Orbits(OrbitsArgs),
    /// Orbit of one Collatz start value.
    Collatz(CollatzArgs),
    /// Whether residues mod 2^k correspond one-to-one with parity vectors of length k.
    CollatzBijection(BijectionArgs),
    /// Point count of y^2 + a*x^3 + b*x = 0 over F_p, directly and by slices.
    CurveCount(CurveCountArgs),
    /// Slice-count identity and Hasse check over many seeded random curves.
    CurveSweep(CurveSweepArgs),
    /// Side-by-side Milnor data of r∘f and periodic points of the gradient flow (exploratory).
    Theorem1Probe(ProbeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Milnor(_) => "milnor",
            Command::Groebner(_) => "groebner",
            Command::Inertia(_) => "inertia",
            Command::WeylApply(_) => "weyl-apply",
            Command::Orbits(_) => "orbits",
            Command::Collatz(_) => "collatz",
            Command::CollatzBijection(_) => "collatz-bijection",
            Command::CurveCount(_) => "curve-count",
            Command::CurveSweep(_) => "curve-sweep",
            Command::Theorem1Probe(_) => "theorem1-probe",
        }
    }

    fn args_json(&self) -> Value {
        let v = match self {
            Command::Milnor(a) => serde_json::to_value(a),
            Command::Groebner(a) => serde_json::to_value(a),
            Command::Inertia(a) => serde_json::to_value(a),
            Command::WeylApply(a) => serde_json::to_value(a),
            Command::Orbits(a) => serde_json::to_value(a),
            Command::Collatz(a) => serde_json::to_value(a),
            Command::CollatzBijection(a) => serde_json::to_value(a),
            Command::CurveCount(a) => serde_json::to_value(a),
            Command::CurveSweep(a) => serde_json::to_value(a),
            Command::Theorem1Probe(a) => serde_json::to_value(a),
        };
        v.expect("flag structs serialize")
    }
}

#[derive(Args, Debug, Serialize)]
pub struct MilnorArgs {
    /// Polynomial with integer or rational coefficients, e.g. "y^3+x^2+x^3".
    #[arg(long)]
    pub f: String,
    /// Residue characteristic.
    #[arg(long)]
    pub p: u64,
    /// Largest truncation order tried before declaring the dimension infinite.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct GroebnerArgs {
    /// Generators separated by `;`.
    #[arg(long)]
    pub gens: String,
    /// grevlex, lex (local-degree-anti is rejected: it is not a well-order).
    #[arg(long, default_value = "grevlex")]
    pub order: OrderKind,
    /// Work over F_p; over Q when absent.
    #[arg(long)]
    pub p: Option<u64>,
    /// Polynomials to test for membership (repeatable).
    #[arg(long)]
    pub member: Vec<String>,
    /// List at most this many standard monomials.
    #[arg(long, default_value_t = 1000)]
    pub max_standard: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct InertiaArgs {
    /// Work over F_p; over Q when absent.
    #[arg(long)]
    pub p: Option<u64>,
    /// Truncated module: "x^4" (one variable) or "(x,y)^3".
    #[arg(long)]
    pub module: String,
    /// Operator D, e.g. "d1" or "x*d1^2"; must have no zero-order term.
    #[arg(long)]
    pub op: String,
    /// Test D∘∂^k for k = 0..=level.
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// Element u whose images (D∘∂^k)(u) are reported.
    #[arg(long)]
    pub element: Option<String>,
    /// Variable (name or 0-based index) that ∂ differentiates; the first variable by default.
    #[arg(long)]
    pub direction: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct WeylApplyArgs {
    /// Operator, e.g. "x^2*d1^2 + d2" or "x*dx".
    #[arg(long)]
    pub op: String,
    /// Polynomial the operator acts on.
    #[arg(long)]
    pub f: String,
    /// Work over F_p; over Q when absent.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub p: u64,
    /// Components separated by `;`, one per variable.
    #[arg(long)]
    pub system: String,
    /// Euler step for vector fields.
    #[arg(long, default_value_t = 1)]
    pub h: u64,
    /// vector-field (discretized as x + h*g(x)) or self-map.
    #[arg(long, default_value = "vector-field")]
    pub mode: SystemMode,
    /// List at most this many cycles.
    #[arg(long, default_value_t = 1000)]
    pub max_cycles: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CollatzArgs {
    /// Nonnegative start value (arbitrary size).
    #[arg(long)]
    pub start: String,
    /// paper (x/2, 3x+1) or accelerated (x/2, (3x+1)/2).
    #[arg(long, default_value = "paper")]
    pub variant: CollatzVariant,
    /// Maximum number of steps.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct BijectionArgs {
    /// Parity-vector length, at most 16.
    #[arg(long)]
    pub k: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct CurveCountArgs {
    #[arg(long)]
    pub p: u64,
    /// Coefficient of x^3, nonzero mod p.
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    /// Coefficient of x.
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    /// Also list the critical locus of every slice cubic.
    #[arg(long)]
    pub critical_loci: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CurveSweepArgs {
    /// Largest prime included.
    #[arg(long, default_value_t = 101)]
    pub pmax: u64,
    /// Random (a, b) pairs per prime.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Write per-case envelopes here as JSON lines instead of to standard output.
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ProbeArgs {
    /// Polynomial f with integer or rational coefficients.
    #[arg(long)]
    pub f: String,
    /// Odd prime.
    #[arg(long)]
    pub p: u64,
    /// Euler step for the gradient flow.
    #[arg(long, default_value_t = 1)]
    pub h: u64,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: u32,
}

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unparsable input (exit 2).
    Usage(String),
    /// The computation itself failed (exit 1).
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Parse { .. }
            | AlgebraError::UnknownVariable(_)
            | AlgebraError::NotPrime(_)
            | AlgebraError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Compute(format!("i/o error: {e}"))
    }
}

#[derive(Serialize)]
pub struct Envelope<'a> {
    pub version: &'static str,
    pub cmd: &'a str,
    pub config: &'a Value,
    pub timestamp: u64,
    pub payload: Value,
}

/// Settings shared by every subcommand.
pub struct Context {
    pub seed: u64,
    pub state_budget: u64,
    pub vars: Option<Vec<String>>,
}

/// What a subcommand produced.
pub(crate) enum Outcome {
    Single(Value),
    /// Summary plus per-case payloads, optionally routed to a file.
    Sweep {
        summary: Value,
        cases: Vec<Value>,
        jsonl: Option<PathBuf>,
    },
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn config_echo(cli: &Cli) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("output".into(), serde_json::to_value(cli.output).unwrap());
    map.insert("seed".into(), cli.seed.into());
    map.insert("state_budget".into(), cli.state_budget.into());
    map.insert(
        "vars".into(),
        serde_json::to_value(&cli.vars).unwrap(),
    );
    map.insert("args".into(), cli.command.args_json());
    Value::Object(map)
}

fn write_envelope<W: Write>(out: &mut W, cmd: &str, config: &Value, payload: Value, pretty: bool) -> std::io::Result<()> {
    let env = Envelope {
        version: VERSION,
        cmd,
        config,
        timestamp: timestamp(),
        payload,
    };
    if pretty {
        serde_json::to_writer_pretty(&mut *out, &env)?;
    } else {
        serde_json::to_writer(&mut *out, &env)?;
    }
    writeln!(out)
}

fn execute<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let ctx = Context {
        seed: cli.seed,
        state_budget: cli.state_budget,
        vars: cli.vars.clone(),
    };
    let outcome = commands::dispatch(&cli.command, &ctx)?;
    let cmd = cli.command.name();
    let config = config_echo(cli);
    match (outcome, cli.output) {
        (Outcome::Single(payload), OutputMode::Json) => write_envelope(out, cmd, &config, payload, true)?,
        (Outcome::Single(payload), OutputMode::Text) => render::text(out, cmd, &payload)?,
        (Outcome::Sweep { summary, cases, jsonl }, mode) => {
            if let Some(path) = &jsonl {
                let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                for case in cases.iter().cloned() {
                    write_envelope(&mut file, cmd, &config, case, false)?;
                }
                file.flush()?;
            }
            match mode {
                OutputMode::Json => {
                    if jsonl.is_none() {
                        for case in cases.iter().cloned() {
                            write_envelope(out, cmd, &config, case, false)?;
                        }
                    }
                    write_envelope(out, cmd, &config, summary, false)?;
                }
                OutputMode::Text => render::sweep_table(out, &summary, &cases)?,
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the subcommand and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::apply_config_file(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
