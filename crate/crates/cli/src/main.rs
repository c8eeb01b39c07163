//! `dioph`: command-line front end for dioph-core.
//!
//! Elements are integral-basis coordinates written as comma-separated exact
//! rationals (`1/2,-3`). Ideals are `;`-separated generator rows in the same
//! encoding (HNF rows are accepted as generators), or a single integer `n` for
//! nO. Results go to stdout as JSON, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 resource budget
//! exceeded.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dioph_core::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Parse(_)) => 2,
            CliError::Core(e) if e.is_resource() => 3,
            CliError::Core(_) => 1,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "usage".into(),
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Exact number-field arithmetic and diophantine definitions")]
pub struct Cli {
    /// Directory holding fields.json and curves.json (default: $DIOPH_CATALOGUE).
    #[arg(long, global = true)]
    pub catalogue: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Decimal-digit cap for heights in curve computations.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub digit_budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    Json,
    /// One `path = value` line per JSON leaf.
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a catalogue field, or list the catalogue.
    Field(FieldArgs),
    /// Ideal arithmetic in O_K.
    Ideal(IdealArgs),
    /// Witness (x, y) with (2x-1)(3x-1) = y a for a nonzero integral a.
    Nonzero(NonzeroArgs),
    /// The forcing lemma: parameters, single checks and the fuzz harness.
    Forcing {
        #[command(subcommand)]
        command: ForcingCommand,
    },
    /// s in S with s = k modulo an ideal, with a certificate.
    Approx(ApproxArgs),
    /// Emit a polynomial system as JSON.
    Emit(EmitArgs),
    /// Check a witness against a system exactly.
    Verify(VerifyArgs),
    /// Rewrite a system over Z in integral-basis coordinates.
    Scalarize(ScalarizeArgs),
    /// Reduction plan through complex conjugations and fixed fields.
    Plan(PlanArgs),
    /// Run the acceptance criteria and report each one.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Catalogue name; omit to list all names.
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdealOp {
    /// HNF and norm of A.
    Show,
    Mul,
    Sum,
    Intersect,
    /// Does A divide B?
    Divides,
    Coprime,
    /// Prime factorization of A.
    Factor,
    /// Two-element representation of A.
    TwoElement,
    /// num and den of --element.
    NumDen,
}

#[derive(Args, Debug)]
pub struct IdealArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, value_enum, default_value_t = IdealOp::Show)]
    pub op: IdealOp,
    /// First ideal, e.g. `2,0;1,1` or `5`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second ideal.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Element coordinates, for num-den.
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Args, Debug)]
pub struct NonzeroArgs {
    #[arg(long)]
    pub field: String,
    /// Integral-basis coordinates of a, e.g. `0,5` for 5i in gauss.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
}

#[derive(Subcommand, Debug)]
pub enum ForcingCommand {
    /// Least n for a given degree ell.
    N {
        #[arg(long)]
        ell: u32,
    },
    /// Run one instance (alpha, I, k).
    Check(ForcingCheckArgs),
    /// Random instances with alpha outside the base ring.
    Fuzz(ForcingFuzzArgs),
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    /// Top field L (Galois over Q).
    #[arg(long)]
    pub field: String,
    /// Base field K; Q when omitted.
    #[arg(long)]
    pub base: Option<String>,
    /// Coordinates in L of the image of K's generator.
    #[arg(long, allow_hyphen_values = true)]
    pub embedding: Option<String>,
}

#[derive(Args, Debug)]
pub struct ForcingCheckArgs {
    #[command(flatten)]
    pub tower: TowerArgs,
    /// alpha in O_L.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Ideal I of O_K.
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: String,
    /// k in K.
    #[arg(long, allow_hyphen_values = true)]
    pub k: String,
}

#[derive(Args, Debug)]
pub struct ForcingFuzzArgs {
    #[command(flatten)]
    pub tower: TowerArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 20)]
    pub height_bound: i64,
    #[arg(long, default_value_t = 1_000_000)]
    pub norm_bound: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[arg(long)]
    pub curve: String,
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    /// Ideal of the curve's field, e.g. `35`.
    #[arg(long, allow_hyphen_values = true)]
    pub modulus: String,
}

#[derive(Args, Debug)]
pub struct EmitArgs {
    /// A predicate kind, or one of nonzero, u, ok, coset.
    #[arg(long)]
    pub predicate: String,
    #[arg(long)]
    pub field: String,
    /// Base field K; defaults to the field itself (Q for coset).
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub embedding: Option<String>,
    /// Curve for coset.
    #[arg(long, default_value = "mordell_m2")]
    pub curve: String,
    /// Coset representatives as multiples of the generator.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub reps: Vec<i64>,
    /// Index r of the subgroup rE(K) for coset.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    /// Fix a parameter: `name=coords` (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub bind: Vec<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub witness: PathBuf,
}

#[derive(Args, Debug)]
pub struct ScalarizeArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Also map this witness to integers and check the scalar system.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    #[arg(long)]
    pub field: String,
    /// Check the side conditions of the real-base variant.
    #[arg(long)]
    pub l0_variant: bool,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Reduced sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u32>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.digit_budget == 0 {
        eprintln!("error[usage]: --digit-budget must be positive");
        return ExitCode::from(2);
    }
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error[usage]: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match commands::run(&cli) {
        Ok(r) => {
            let body = match cli.format {
                Format::Json => r.json,
                Format::Text => text(&r.value),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}

fn text(v: &serde_json::Value) -> String {
    let mut lines = Vec::new();
    flatten(v, String::new(), &mut lines);
    lines.join("\n")
}

fn flatten(v: &serde_json::Value, path: String, out: &mut Vec<String>) {
    use serde_json::Value;
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(x, join(k), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(x, join(&i.to_string()), out)),
        Value::String(s) => out.push(format!("{path} = {s}")),
        _ => out.push(format!("{path} = {v}")),
    }
}
