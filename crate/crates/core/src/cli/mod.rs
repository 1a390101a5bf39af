//! Command-line interface: argument parsing, configuration and dispatch.
//!
//! Exit status is 0 when everything requested passed, 1 when a check failed,
//! 2 for usage errors and 3 when an internal identity was violated.

pub mod cache;
pub mod suite;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::braids::{link_invariant, BraidWord, InvariantResult};
use crate::coalgebra::{classical_limit_gamma, Coalgebra};
use crate::error::{Error, Result};
use crate::pbw::PbwMonomial;
use crate::report::CheckReport;
use crate::reps::{build_rep, validate_rep, Generator};
use crate::ribbon::{check_ybe, r_matrix, twist_table, RVariant};
use crate::scalar::{check_parameter, with_parameter, Numeric, RatFunc, Scalar, ScalarError, DEFAULT_T0};
use crate::truncated::{
    cmn_element, dmn_element, independence_cap, pbw_independence_rank, theta, LevelIndex, ProductRange, RankMode,
};

use cache::{canonical_json, DiskCache, DEFAULT_CACHE_DIR};

pub const DEFAULT_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qsl2", version, about = "Exact computations in the matrix-sequence model of quantum sl2")]
pub struct Cli {
    /// Coefficient field: exact rational functions or complex numbers at --t0.
    #[arg(long, global = true, env = "QSL2_MODE", value_enum, default_value = "exact")]
    pub mode: Mode,
    /// Evaluation point, "re" or "re,im".
    #[arg(long, global = true, env = "QSL2_T0")]
    pub t0: Option<String>,
    /// Truncation level.
    #[arg(long, global = true, env = "QSL2_CAP")]
    pub cap: Option<usize>,
    /// Output format; csv is available for gamma and twist.
    #[arg(long, global = true, env = "QSL2_FORMAT", value_enum, default_value = "pretty")]
    pub format: Format,
    /// Directory for cached structure constants [default: .qsl2-cache].
    #[arg(long, global = true, env = "QSL2_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print one generator of the representation V_m.
    Rep {
        #[arg(long)]
        m: usize,
        #[arg(long = "gen", default_value = "X")]
        generator: Generator,
    },
    /// Check the defining relations at level m.
    Validate {
        #[arg(long)]
        m: usize,
    },
    /// The sequence Theta(Z) of a PBW monomial.
    Theta {
        #[arg(long)]
        mono: PbwMonomial,
    },
    /// The Casimir projector C_{m,n}.
    Cmn {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// The projector D_{m,N}.
    Dmn {
        #[arg(long)]
        m: usize,
        #[arg(long = "N")]
        big_n: usize,
        /// Start the product at level 1 instead of 0.
        #[arg(long)]
        from_one: bool,
    },
    /// Rank of the images of a list of PBW monomials.
    PbwRank {
        /// JSON list of monomials, as "k=..,n=..,p=.." strings or {"kexp","n","p"} objects.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
    /// Decomposition of V_m ⊗ V_n.
    Cg {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Structure constants of the dual algebra.
    Gamma {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Coproduct of e_{a,b}(q).
    Delta {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Antipode axiom for every e_{a,b}(q) on levels up to --max-level.
    HopfCheck {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        max_level: usize,
    },
    /// Compare structure constants at t = 1 + eps with the classical ones.
    ClassicalLimit {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
    /// The R-matrix block on V_m ⊗ V_n.
    Rmatrix {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        paper_literal_r: bool,
    },
    /// The Yang-Baxter equation on three levels.
    Ybe {
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        #[arg(long)]
        paper_literal_r: bool,
    },
    /// Twist scalars theta_m.
    Twist {
        #[arg(long)]
        max_m: usize,
    },
    /// Invariant of a braid closure colored by V_color.
    Invariant {
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        color: usize,
        /// Compute in complex arithmetic at --t0.
        #[arg(long)]
        numeric: bool,
    },
    /// Run the whole invariant suite up to a level.
    CheckAll {
        #[arg(long)]
        max_level: usize,
    },
}

/// Resolved settings shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub mode: Mode,
    pub t0: Complex64,
    pub cap: Option<usize>,
    pub format: Format,
    pub cache_dir: PathBuf,
}

impl Config {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let t0 = match &cli.t0 {
            Some(s) => parse_complex(s)?,
            None => Complex64::new(DEFAULT_T0, 0.0),
        };
        let cfg = Config {
            mode: cli.mode,
            t0,
            cap: cli.cap,
            format: cli.format,
            cache_dir: cli.cache_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
        };
        if cfg.mode == Mode::Numeric {
            check_parameter(cfg.t0, cfg.guard_cap())?;
        }
        Ok(cfg)
    }

    pub fn cap_or(&self, default: usize) -> usize {
        self.cap.unwrap_or(default)
    }

    fn guard_cap(&self) -> usize {
        self.cap_or(DEFAULT_CAP).max(12)
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Scalar(ScalarError::BadParameter(format!("cannot parse {s:?} as a complex number")));
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Summary of a check-style command.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub passed: bool,
    pub checks: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u128>,
}

/// What a command produced, in every format it supports.
struct Output {
    json: serde_json::Value,
    pretty: String,
    csv: Option<String>,
    passed: bool,
}

impl Output {
    fn value<T: Serialize>(v: &T, pretty: String) -> Result<Self> {
        Ok(Output { json: serde_json::to_value(v)?, pretty, csv: None, passed: true })
    }

    fn json<T: Serialize>(v: &T) -> Result<Self> {
        let json = serde_json::to_value(v)?;
        let pretty = serde_json::to_string_pretty(&json)?;
        Ok(Output { json, pretty, csv: None, passed: true })
    }

    fn checks(command: &str, checks: CheckReport) -> Result<Self> {
        let passed = checks.passed();
        let report = RunReport { command: command.to_string(), passed, checks, elapsed_ms: None };
        let mut pretty = report.checks.to_string();
        let failed = report.checks.failures().count();
        let _ = write!(pretty, "{}: {} checks, {} failed", command, report.checks.len(), failed);
        Ok(Output { json: serde_json::to_value(&report)?, pretty, csv: None, passed })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Rep { .. } => "rep",
        Command::Validate { .. } => "validate",
        Command::Theta { .. } => "theta",
        Command::Cmn { .. } => "cmn",
        Command::Dmn { .. } => "dmn",
        Command::PbwRank { .. } => "pbw-rank",
        Command::Cg { .. } => "cg",
        Command::Gamma { .. } => "gamma",
        Command::Delta { .. } => "delta",
        Command::HopfCheck { .. } => "hopf-check",
        Command::ClassicalLimit { .. } => "classical-limit",
        Command::Rmatrix { .. } => "rmatrix",
        Command::Ybe { .. } => "ybe",
        Command::Twist { .. } => "twist",
        Command::Invariant { .. } => "invariant",
        Command::CheckAll { .. } => "check-all",
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MonomialSpec {
    Text(String),
    Fields(PbwMonomial),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RankSpecFile {
    List(Vec<MonomialSpec>),
    Wrapped { monomials: Vec<MonomialSpec> },
}

fn read_rank_spec(path: &PathBuf) -> Result<Vec<PbwMonomial>> {
    let text = std::fs::read_to_string(path)?;
    let spec: RankSpecFile = serde_json::from_str(&text)?;
    let items = match spec {
        RankSpecFile::List(v) | RankSpecFile::Wrapped { monomials: v } => v,
    };
    items
        .into_iter()
        .map(|m| match m {
            MonomialSpec::Text(s) => s.parse().map_err(Error::InvalidArgument),
            MonomialSpec::Fields(m) => Ok(m),
        })
        .collect()
}

#[derive(Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
struct InvariantOutput<S> {
    normalized_at_t0: [f64; 2],
    result: InvariantResult<S>,
    t0: [f64; 2],
}

/// Commands whose arithmetic runs over the configured field.
fn execute<S: Scalar + Serialize + DeserializeOwned>(cmd: &Command, cfg: &Config) -> Result<Output> {
    let co = Coalgebra::<S>::with_store(Box::new(DiskCache::<S>::open(&cfg.cache_dir)));
    match cmd {
        Command::Rep { m, generator } => {
            let mat = build_rep::<S>(*m).generator(*generator).clone();
            Output::value(&mat, mat.to_string())
        }
        Command::Validate { m } => Output::checks("validate", validate_rep::<S>(*m)?),
        Command::Theta { mono } => Output::json(&theta::<S>(mono, cfg.cap_or(DEFAULT_CAP))),
        Command::Cmn { m, n } => Output::json(&cmn_element::<S>(*m, *n, cfg.cap_or(DEFAULT_CAP.max(*m).max(*n)))?),
        Command::Dmn { m, big_n, from_one } => {
            let range = if *from_one { ProductRange::FromOne } else { ProductRange::FromZero };
            Output::json(&dmn_element::<S>(*m, *big_n, cfg.cap_or(*big_n), range)?)
        }
        Command::Cg { m, n } => {
            let cg = co.decomposition(*m, *n)?;
            let pretty = format!(
                "components: {:?}\nA =\n{}\nAinv =\n{}",
                cg.components, cg.a, cg.ainv
            );
            Output::value(&*cg, pretty)
        }
        Command::Gamma { m, n } => {
            let table = co.gamma(*m, *n)?;
            let mut out = Output::json(&*table)?;
            let mut csv = String::from("m,a,b,n,c,d,p,u,v,gamma\n");
            for r in table.rows() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.m,
                    r.a,
                    r.b,
                    r.n,
                    r.c,
                    r.d,
                    r.p,
                    r.u,
                    r.v,
                    csv_field(&r.gamma.to_string())
                );
            }
            out.csv = Some(csv);
            Ok(out)
        }
        Command::Delta { q, a, b } => {
            let e = LevelIndex::new(*q, *a, *b)?;
            Output::json(&co.delta(&e, cfg.cap_or(DEFAULT_CAP))?)
        }
        Command::HopfCheck { q, max_level } => {
            let mut report = CheckReport::new();
            for a in 0..=*q {
                for b in 0..=*q {
                    let e = LevelIndex::new(*q, a, b)?;
                    for r in 0..=*max_level {
                        report.record(format!("antipode axiom for e({q},{a},{b}) at level {r}"), co.hopf_axiom_check(&e, r)?);
                    }
                }
            }
            Output::checks("hopf-check", report)
        }
        Command::Rmatrix { m, n, paper_literal_r } => {
            let variant = if *paper_literal_r { RVariant::PaperLiteral } else { RVariant::Standard };
            let block = r_matrix::<S>(*m, *n, variant)?;
            let pretty = block.matrix.to_string();
            Output::value(&block, pretty)
        }
        Command::Ybe { levels, paper_literal_r } => {
            let variant = if *paper_literal_r { RVariant::PaperLiteral } else { RVariant::Standard };
            let &[a, b, c] = levels.as_slice() else {
                return Err(Error::InvalidArgument(format!("--levels needs three values, got {}", levels.len())));
            };
            let mut report = CheckReport::new();
            report.record(format!("Yang-Baxter on ({a},{b},{c})"), check_ybe::<S>(a, b, c, variant)?);
            Output::checks("ybe", report)
        }
        Command::Twist { max_m } => {
            let table = twist_table(&co, *max_m)?;
            let mut out = Output::json(&table)?;
            let mut csv = String::from("m,theta\n");
            for (m, th) in &table.thetas {
                let _ = writeln!(csv, "{m},{}", csv_field(&th.to_string()));
            }
            out.pretty = table.thetas.iter().map(|(m, th)| format!("theta_{m} = {th}\n")).collect();
            out.csv = Some(csv);
            Ok(out)
        }
        Command::Invariant { braid, strands, color, .. } => {
            let word = BraidWord::parse(*strands, braid)?;
            let result = link_invariant(&co, &word, *color)?;
            let value = with_parameter(cfg.t0, cfg.guard_cap(), || result.normalized.to_complex())??;
            let out = InvariantOutput {
                normalized_at_t0: [value.re, value.im],
                result,
                t0: [cfg.t0.re, cfg.t0.im],
            };
            Output::json(&out)
        }
        Command::CheckAll { max_level } => Output::checks("check-all", suite::check_all(&co, *max_level)?),
        Command::PbwRank { .. } | Command::ClassicalLimit { .. } => unreachable!("handled before dispatch"),
    }
}

fn execute_in_mode(cmd: &Command, cfg: &Config) -> Result<Output> {
    match cmd {
        Command::PbwRank { spec, exact, threshold } => {
            let monos = read_rank_spec(spec)?;
            let cap = cfg.cap.unwrap_or_else(|| independence_cap(&monos));
            let mode = if *exact { RankMode::Exact } else { RankMode::Numeric { t0: cfg.t0, threshold: *threshold } };
            let report = pbw_independence_rank(&monos, cap, mode)?;
            let mut out = Output::json(&report)?;
            out.passed = report.full_rank;
            Ok(out)
        }
        Command::ClassicalLimit { m, n, eps, tol } => {
            let report = classical_limit_gamma(*m, *n, *eps)?;
            let mut out = Output::json(&report)?;
            out.passed = report.poles.is_empty() && report.max_deviation <= *tol;
            Ok(out)
        }
        Command::Invariant { numeric: true, .. } => numeric(cfg, cmd),
        _ => match cfg.mode {
            Mode::Exact => execute::<RatFunc>(cmd, cfg),
            Mode::Numeric => numeric(cfg, cmd),
        },
    }
}

fn numeric(cfg: &Config, cmd: &Command) -> Result<Output> {
    check_parameter(cfg.t0, cfg.guard_cap())?;
    with_parameter(cfg.t0, cfg.guard_cap(), || execute::<Numeric>(cmd, cfg))?
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) | Error::Linalg(_) => 3,
        Error::Scalar(ScalarError::Pole) | Error::Scalar(ScalarError::DivisionByZero) => 3,
        _ => 2,
    }
}

/// Parse `args` (including the program name), run the command and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cfg = match Config::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let start = Instant::now();
    let output = match execute_in_mode(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code(&e);
            let label = if code == 3 { "invariant violation" } else { "error" };
            let _ = writeln!(err, "{label}: {e}");
            return code;
        }
    };
    let text = match cfg.format {
        Format::Json => canonical_json(&output.json).map(|s| {
            let pretty: serde_json::Value = serde_json::from_str(&s).unwrap_or(serde_json::Value::Null);
            serde_json::to_string_pretty(&pretty).unwrap_or(s) + "\n"
        }),
        Format::Csv => match output.csv {
            Some(c) => Ok(c),
            None => {
                let _ = writeln!(err, "error: csv output is only available for gamma and twist");
                return 2;
            }
        },
        Format::Pretty => {
            let mut s = output.pretty;
            if !s.ends_with('\n') {
                s.push('\n');
            }
            if matches!(cli.command, Command::Validate { .. } | Command::HopfCheck { .. } | Command::Ybe { .. } | Command::CheckAll { .. }) {
                let _ = writeln!(s, "{} finished in {} ms", command_name(&cli.command), start.elapsed().as_millis());
            }
            Ok(s)
        }
    };
    match text {
        Ok(t) => {
            let _ = out.write_all(t.as_bytes());
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    }
    if output.passed {
        0
    } else {
        1
    }
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
