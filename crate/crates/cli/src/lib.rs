//! Command-line front end: argument model, dispatch and exit codes.
//!
//! [`run`] does everything `main` does except touching the process, so the
//! acceptance suite can drive it in-process.

pub mod anchors;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psialg::{AlgebraKind, OrderKind, PivotScheme, PrimeModulus};
use serde::Serialize;
use serde_json::{json, Value};

pub use report::{render, CheckRecord, Format, Report, Status, Table};

#[derive(Parser, Debug)]
#[command(name = "psialg", version, about = "Exact checks for the section rings A_n and B_(n,m)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// auto, rational or prime:P
    #[arg(long, global = true, default_value = "auto", value_parser = parse_field)]
    pub field: FieldChoice,
    /// Normalization of A_n; B_(n,m) always uses the common extra point.
    #[arg(long, global = true, value_enum)]
    pub pivot: Option<PivotChoice>,
    /// Seed for every randomized choice (ChaCha8).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Does not affect the output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Auto,
    Rational,
    Prime(PrimeModulus),
}

impl Serialize for FieldChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FieldChoice::Auto => s.serialize_str("auto"),
            FieldChoice::Rational => s.serialize_str("rational"),
            FieldChoice::Prime(p) => s.serialize_str(&format!("prime:{}", p.get())),
        }
    }
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    match s {
        "auto" => Ok(FieldChoice::Auto),
        "rational" => Ok(FieldChoice::Rational),
        _ => {
            let p = s.strip_prefix("prime:").ok_or_else(|| format!("expected auto, rational or prime:P, got {s}"))?;
            let p: u64 = p.parse().map_err(|e| format!("bad prime {p}: {e}"))?;
            PrimeModulus::new(p).map(FieldChoice::Prime).map_err(|e| e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotChoice {
    Cyclic,
    Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    An,
    Bnm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderArg {
    Grevlex,
    Lex,
    BlockGrevlex,
}

impl From<OrderArg> for OrderKind {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Grevlex => OrderKind::Grevlex,
            OrderArg::Lex => OrderKind::Lex,
            OrderArg::BlockGrevlex => OrderKind::BlockGrevlex,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AlgebraArgs {
    #[arg(long, value_enum, default_value = "an")]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    /// Extra points for B_(n,m).
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generators and relations.
    Presentation {
        #[command(subcommand)]
        action: PresentationAction,
    },
    /// Hilbert functions: closed form, brute force, or both compared.
    Hilbert {
        #[command(subcommand)]
        action: HilbertAction,
    },
    /// Gröbner basis of the relation ideal.
    Gb {
        #[command(subcommand)]
        action: GbAction,
    },
    /// Quadratic dual dimensions against the inverse Hilbert series.
    Koszul(KoszulArgs),
    /// Points from random configurations and the checks run on them.
    Sample(SampleArgs),
    /// Dimension of the singular locus from Jacobian minors.
    Singular(SingularArgs),
    /// Presentation counts, Hilbert identity and standard monomials for A_n.
    VerifyTheoremA(TheoremAArgs),
}

#[derive(Subcommand, Debug)]
pub enum PresentationAction {
    Dump(AlgebraArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HilbertArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[arg(long, default_value_t = 4)]
    pub max_total: u32,
}

#[derive(Subcommand, Debug)]
pub enum HilbertAction {
    /// Coefficients of the closed-form series.
    Lee(HilbertArgs),
    /// Graded dimensions by linear algebra on each slice.
    Brute(HilbertArgs),
    /// Both, compared degree by degree.
    Verify(HilbertArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GbArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    /// Stop at this total degree.
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long, value_enum, default_value = "grevlex")]
    pub order: OrderArg,
    /// Also compare standard monomial counts with the slices up to this degree.
    #[arg(long)]
    pub verify_total: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum GbAction {
    Run(GbArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KoszulArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    /// Largest allowed dim(V)^kmax.
    #[arg(long, default_value_t = 300_000)]
    pub budget: u128,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Random points that are not from configurations; all must fail.
    #[arg(long, default_value_t = 20)]
    pub random_points: usize,
    /// Coordinates are drawn from [-range, range].
    #[arg(long, default_value_t = 30)]
    pub range: i64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SingularArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    /// Minor size; defaults to the codimension at smooth points.
    #[arg(long)]
    pub codim: Option<usize>,
    /// Largest allowed number of minors.
    #[arg(long, default_value_t = 20_000)]
    pub budget: u128,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TheoremAArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub max_total: u32,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Errors that stop a run before a report exists.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl From<psialg::Error> for RunError {
    fn from(e: psialg::Error) -> Self {
        match e {
            psialg::Error::Construction(_) => RunError::Math(e.to_string()),
            other => RunError::Usage(other.to_string()),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Math(_) => 1,
            RunError::Usage(_) | RunError::Io(_) => 2,
        }
    }
}

/// Resolved algebra request.
#[derive(Clone, Debug)]
pub(crate) struct Algebra {
    pub kind: AlgebraKind,
    pub n: usize,
    pub m: usize,
    pub pivot: PivotScheme,
}

impl Algebra {
    pub(crate) fn resolve(a: &AlgebraArgs, pivot: Option<PivotChoice>) -> Result<Self, RunError> {
        match a.kind {
            KindArg::An => {
                if a.m.is_some_and(|m| m != 0) {
                    return Err(RunError::Usage("--m applies to --kind bnm only".into()));
                }
                Self::an(a.n, pivot)
            }
            KindArg::Bnm => {
                if pivot == Some(PivotChoice::Cyclic) {
                    return Err(RunError::Usage("B_(n,m) is normalized at the common extra point".into()));
                }
                let m = a.m.unwrap_or(1);
                if m == 0 {
                    return Self::an(a.n, Some(PivotChoice::Cyclic));
                }
                if a.n < 2 {
                    return Err(RunError::Usage(format!("B_(n,m) needs n >= 2, got {}", a.n)));
                }
                Ok(Algebra { kind: AlgebraKind::Bnm, n: a.n, m, pivot: PivotScheme::common(a.n, a.n + m, a.n + m) })
            }
        }
    }

    pub(crate) fn an(n: usize, pivot: Option<PivotChoice>) -> Result<Self, RunError> {
        if n < 3 {
            return Err(RunError::Usage(format!("A_n needs n >= 3, got {n}")));
        }
        let pivot = match pivot.unwrap_or(PivotChoice::Cyclic) {
            PivotChoice::Cyclic => PivotScheme::cyclic(n),
            PivotChoice::Common => PivotScheme::common_for_an(n),
        };
        Ok(Algebra { kind: AlgebraKind::An, n, m: 0, pivot })
    }

    pub(crate) fn build<F: psialg::Field>(&self, ctx: &F::Context) -> Result<psialg::PresentationSpec<F>, RunError> {
        Ok(match self.kind {
            AlgebraKind::An => psialg::build_an(ctx, self.n, self.pivot.clone())?,
            AlgebraKind::Bnm => psialg::build_bnm(ctx, self.n, self.m)?,
        })
    }

    pub(crate) fn describe(&self) -> Value {
        json!({"kind": self.kind, "n": self.n, "m": self.m, "pivot": self.pivot.kind()})
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Presentation { action: PresentationAction::Dump(_) } => "presentation dump",
        Command::Hilbert { action: HilbertAction::Lee(_) } => "hilbert lee",
        Command::Hilbert { action: HilbertAction::Brute(_) } => "hilbert brute",
        Command::Hilbert { action: HilbertAction::Verify(_) } => "hilbert verify",
        Command::Gb { action: GbAction::Run(_) } => "gb run",
        Command::Koszul(_) => "koszul",
        Command::Sample(_) => "sample",
        Command::Singular(_) => "singular",
        Command::VerifyTheoremA(_) => "verify-theorem-a",
    }
}

fn command_args(c: &Command) -> Value {
    let v = match c {
        Command::Presentation { action: PresentationAction::Dump(a) } => serde_json::to_value(a),
        Command::Hilbert { action: HilbertAction::Lee(a) | HilbertAction::Brute(a) | HilbertAction::Verify(a) } => {
            serde_json::to_value(a)
        }
        Command::Gb { action: GbAction::Run(a) } => serde_json::to_value(a),
        Command::Koszul(a) => serde_json::to_value(a),
        Command::Sample(a) => serde_json::to_value(a),
        Command::Singular(a) => serde_json::to_value(a),
        Command::VerifyTheoremA(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}

/// Everything that determines the report. Threads, output path and the
/// timing flag are left out because they must not change the output.
fn config_echo(cli: &Cli) -> Value {
    json!({
        "command": command_name(&cli.command),
        "args": command_args(&cli.command),
        "field": cli.global.field,
        "pivot": cli.global.pivot,
        "seed": cli.global.seed,
        "format": cli.global.format,
    })
}

/// Builds the report for parsed arguments on the current thread pool.
pub fn execute(cli: &Cli) -> Result<Report, RunError> {
    let start = Instant::now();
    let mut report = Report::new(config_echo(cli));
    commands::dispatch(cli, &mut report)?;
    if cli.global.timings {
        report.timings_ms = Some([("total".to_string(), start.elapsed().as_millis())].into_iter().collect());
    }
    Ok(report)
}

/// Parses `args` (including the program name), runs the command and renders
/// the report. Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
/// budget error.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text.into_bytes(), stderr: String::new() }
            } else {
                Outcome { code, stdout: Vec::new(), stderr: text }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: 2, stdout: Vec::new(), stderr: format!("thread pool: {e}") },
    };
    let result = pool.install(|| execute(&cli)).and_then(|report| {
        let bytes = render(&report, cli.global.format);
        let code = if report.failed() { 1 } else { 0 };
        match &cli.global.out {
            Some(path) => {
                std::fs::write(path, &bytes)?;
                Ok(Outcome { code, stdout: Vec::new(), stderr: String::new() })
            }
            None => Ok(Outcome { code, stdout: bytes, stderr: String::new() }),
        }
    });
    result.unwrap_or_else(|e| Outcome { code: e.exit_code(), stdout: Vec::new(), stderr: format!("error: {e}\n") })
}
