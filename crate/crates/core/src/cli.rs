//! The `diffset` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a mathematical violation
//! (a subset below the bound, a rejected certificate, a grid counterexample),
//! 3 inconclusive (budget exhausted, certificate gaps, unresolved cells).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construction::{build_baseline, build_pn, build_truncated, BaselineKind, GroundSet};
use crate::diffset::{diff_count, distance_count};
use crate::interval::Interval;
use crate::io::{format_set, read_set, SetData};
use crate::prover::{
    certify, check_subadditivity, check_tight_inequality_grid, summarize, validate_certificate,
    Certificate, ClaimId,
};
use crate::verifier::{
    min_subset_bnb_parallel, verify_exhaustive, LocalReport, Mode, ThresholdBound, CSV_HEADER,
    DEFAULT_BUDGET, EXHAUSTIVE_CAP,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "diffset", version, about = "Point sets with small difference sets and strong local properties")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a point set and write it in the line-oriented set format.
    Construct(ConstructArgs),
    /// Check |Q - Q| >= k^log2(3) over the k-subsets of a set.
    Verify(VerifyArgs),
    /// Certify one of the analytic inequalities.
    Prove(ProveArgs),
    /// Re-check a serialized certificate from scratch.
    ValidateCertificate(ValidateArgs),
    /// Comparison table over several set files.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Hypercube,
    Ap,
    Sidon,
    Random,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Build the full projected hypercube P_levels.
    #[arg(short = 'l', long, conflicts_with = "n")]
    levels: Option<usize>,
    /// Number of points (hypercube kinds take the canonical-order prefix).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "hypercube")]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; the set goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Bnb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyFormat {
    Text,
    Csv,
    JsonLines,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long, conflicts_with = "all_k", required_unless_present = "all_k")]
    k: Option<usize>,
    #[arg(long)]
    all_k: bool,
    /// Default: exhaustive up to 20 points, branch-and-bound above.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Node budget per k for branch-and-bound.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Also write the reports to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: VerifyFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Claim {
    Subadditivity,
    GammaReduction,
    F0,
    F1,
    DomainReduction,
    TightGrid,
}

#[derive(Args, Debug)]
struct ProveArgs {
    #[arg(value_enum)]
    claim: Claim,
    /// Grid bound for `tight-grid`.
    #[arg(long, default_value_t = 30)]
    max: u64,
    /// Single instance for `subadditivity`: a^p + b^p > (a+b)^p.
    #[arg(long, requires = "b")]
    a: Option<f64>,
    #[arg(long, requires = "a")]
    b: Option<f64>,
    /// Write the certificate (or grid report) here.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    cert: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    JsonLines,
}

#[derive(Args, Debug)]
struct ReportArgs {
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Subset size for the min-|Q-Q| column (capped at the set size).
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

/// Collected output of one command.
struct Outcome {
    out: String,
    err: String,
    code: i32,
}

impl Outcome {
    fn new() -> Self {
        Outcome { out: String::new(), err: String::new(), code: EXIT_OK }
    }

    fn raise(&mut self, code: i32) {
        // violation outranks inconclusive outranks success
        let rank = |c: i32| match c {
            EXIT_VIOLATION => 3,
            EXIT_INCONCLUSIVE => 2,
            EXIT_USAGE => 4,
            _ => 0,
        };
        if rank(code) > rank(self.code) {
            self.code = code;
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ProofViolation { .. } | Error::Certificate(_) => EXIT_VIOLATION,
        Error::Inconclusive(_) | Error::Undecidable { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Error::Invalid(format!("thread pool: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match outcome {
        Ok(o) => {
            let _ = out.write_all(o.out.as_bytes());
            let _ = err.write_all(o.err.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Prove(a) => prove(a),
        Command::ValidateCertificate(a) => validate(a),
        Command::Report(a) => report(a),
    }
}

fn construct(args: ConstructArgs) -> Result<Outcome> {
    let set = match (args.kind, args.levels, args.n) {
        (Kind::Hypercube, Some(l), None) => SetData::Hypercube(build_pn(l)?),
        (Kind::Hypercube, None, Some(n)) => SetData::Hypercube(build_truncated(n)?),
        (Kind::Hypercube, _, _) => return Err(Error::Invalid("give exactly one of --levels and --n".into())),
        (kind, None, Some(n)) => {
            let k = match kind {
                Kind::Ap => BaselineKind::ArithmeticProgression,
                Kind::Sidon => BaselineKind::Sidon,
                _ => BaselineKind::RandomIntegers,
            };
            SetData::Integers(build_baseline(k, n, args.seed)?)
        }
        (_, _, _) => return Err(Error::Invalid("baseline kinds take --n".into())),
    };
    let mut o = Outcome::new();
    let summary = format!("size={} diff_count={}\n", set.len(), diff_count(&set));
    match &args.out {
        Some(path) => {
            std::fs::write(path, format_set(&set))?;
            o.out = summary;
        }
        None => {
            o.out = format_set(&set);
            o.err = summary;
        }
    }
    Ok(o)
}

fn verify(args: VerifyArgs) -> Result<Outcome> {
    let set = read_set(&args.input)?;
    let n = set.len();
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    let mode = match args.mode {
        Some(ModeArg::Exhaustive) => Mode::Exhaustive,
        Some(ModeArg::Bnb) => Mode::BranchAndBound,
        None if n <= EXHAUSTIVE_CAP => Mode::Exhaustive,
        None => Mode::BranchAndBound,
    };
    let mut o = Outcome::new();
    let mut body = String::new();
    if args.format == VerifyFormat::Csv {
        body.push_str(CSV_HEADER);
        body.push('\n');
    }
    for k in ks {
        let r = match mode {
            Mode::Exhaustive => verify_exhaustive(&set, k)?,
            Mode::BranchAndBound => min_subset_bnb_parallel(&set, k, args.budget)?,
        };
        match args.format {
            VerifyFormat::Text => body.push_str(&r.text_block()),
            VerifyFormat::Csv => {
                body.push_str(&r.csv_row());
                body.push('\n');
            }
            VerifyFormat::JsonLines => {
                body.push_str(&r.json_row());
                body.push('\n');
            }
        }
        note_report(&mut o, &r);
    }
    if let Some(path) = &args.report {
        std::fs::write(path, &body)?;
    }
    o.out = body;
    Ok(o)
}

fn note_report(o: &mut Outcome, r: &LocalReport) {
    if !r.holds {
        let _ = writeln!(
            o.err,
            "violation: k={} min_diff={} below {} witness={}",
            r.k, r.min_diff, r.bound, r.witness
        );
        o.raise(EXIT_VIOLATION);
    } else if !r.complete {
        let _ = writeln!(
            o.err,
            "inconclusive: k={} budget exhausted after {} nodes; best min_diff={}",
            r.k, r.subsets_checked, r.min_diff
        );
        o.raise(EXIT_INCONCLUSIVE);
    }
}

fn prove(args: ProveArgs) -> Result<Outcome> {
    let mut o = Outcome::new();
    let claim = match args.claim {
        Claim::TightGrid => {
            let r = check_tight_inequality_grid(args.max)?;
            let text = r.to_text();
            if let Some(path) = &args.cert {
                std::fs::write(path, &text)?;
            }
            o.out = text;
            if !r.violations.is_empty() {
                o.raise(EXIT_VIOLATION);
            } else if !r.unresolved.is_empty() {
                o.raise(EXIT_INCONCLUSIVE);
            }
            return Ok(o);
        }
        Claim::Subadditivity if args.a.is_some() => {
            let (a, b) = (args.a.unwrap_or(1.0), args.b.unwrap_or(1.0));
            let proved = check_subadditivity(&Interval::from_f64(64, a), &Interval::from_f64(64, b))?;
            let _ = writeln!(o.out, "a={a} b={b}: a^p + b^p > (a+b)^p {}", if proved { "proved" } else { "refuted" });
            if !proved {
                o.raise(EXIT_VIOLATION);
            }
            return Ok(o);
        }
        Claim::Subadditivity => ClaimId::Subadditivity,
        Claim::GammaReduction => ClaimId::GammaReduction,
        Claim::F0 => ClaimId::F0,
        Claim::F1 => ClaimId::F1,
        Claim::DomainReduction => ClaimId::DomainReduction,
    };
    let cert = certify(claim)?;
    if let Some(path) = &args.cert {
        std::fs::write(path, cert.to_text())?;
    }
    o.out = summarize(&cert);
    if !cert.is_verified() {
        let _ = writeln!(o.err, "{} gaps left uncertified", cert.gaps.len());
        o.raise(EXIT_INCONCLUSIVE);
    }
    Ok(o)
}

fn validate(args: ValidateArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&args.cert)?;
    let cert = Certificate::parse(&text)?;
    let v = validate_certificate(&cert)?;
    let mut o = Outcome::new();
    let _ = writeln!(
        o.out,
        "certificate claim={} valid: {} boxes and {} facts rechecked",
        v.claim, v.boxes_checked, v.facts_checked
    );
    Ok(o)
}

pub const REPORT_HEADER: &str = "input,kind,n,diff_count,distance_count,k,min_diff,bound_lo,bound_hi,holds";

#[derive(Serialize)]
struct TableRow {
    input: String,
    kind: &'static str,
    n: usize,
    diff_count: u64,
    distance_count: u64,
    k: usize,
    min_diff: u64,
    bound_lo: f64,
    bound_hi: f64,
    holds: bool,
}

fn report(args: ReportArgs) -> Result<Outcome> {
    let mut o = Outcome::new();
    if args.format == TableFormat::Csv {
        o.out.push_str(REPORT_HEADER);
        o.out.push('\n');
    }
    for path in &args.inputs {
        let set = read_set(path)?;
        let k = args.k.clamp(1, set.len());
        let r = if set.len() <= EXHAUSTIVE_CAP {
            verify_exhaustive(&set, k)?
        } else {
            min_subset_bnb_parallel(&set, k, args.budget)?
        };
        if !r.complete {
            note_report(&mut o, &r);
        }
        let bound = ThresholdBound::new(k as u64);
        let row = TableRow {
            input: path.display().to_string(),
            kind: set.kind(),
            n: set.len(),
            diff_count: diff_count(&set),
            distance_count: distance_count(&set),
            k,
            min_diff: r.min_diff,
            bound_lo: bound.lo,
            bound_hi: bound.hi,
            holds: r.holds,
        };
        match args.format {
            TableFormat::Csv => {
                let _ = writeln!(
                    o.out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    row.input,
                    row.kind,
                    row.n,
                    row.diff_count,
                    row.distance_count,
                    row.k,
                    row.min_diff,
                    row.bound_lo,
                    row.bound_hi,
                    row.holds
                );
            }
            TableFormat::JsonLines => {
                o.out.push_str(&serde_json::to_string(&row).expect("plain row serializes"));
                o.out.push('\n');
            }
        }
    }
    // rows with holds=false are findings about baselines, not failures
    Ok(o)
}
