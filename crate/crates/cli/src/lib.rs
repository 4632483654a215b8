//! `chibound` subcommands as a library: every command returns its exit
//! code and both output streams, so tests drive it without a process.
//!
//! Exit codes: 0 ok, 1 domain rejection or failed verification, 2 parse or
//! usage error, 3 theory violation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use chibound::engine::{bound, colour, EngineError, Strategy};
use chibound::generators::{grotzsch, h_n, mycielskian, random_cograph, random_gnp, random_in_class, schlafli_complement};
use chibound::io::{parse_certificate, parse_dimacs, parse_graph6, write_certificate, write_dimacs, write_graph6, CertificateDocument, IoError};
use chibound::oracle::{
    chromatic_number_exact, clique_number_exact, max_clique_bruteforce, verify_colouring, CancelToken,
    CLIQUE_BRUTEFORCE_LIMIT, DEFAULT_CHI_LIMIT,
};
use chibound::recognition::{class_membership, max_clique};
use chibound::rng::Rng;
use chibound::Graph;

pub const OK: i32 = 0;
pub const REJECTED: i32 = 1;
pub const USAGE: i32 = 2;
pub const THEORY: i32 = 3;

pub const ORACLE_LIMIT_VAR: &str = "CHIBOUND_ORACLE_LIMIT";

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn new(code: i32, stdout: impl Into<String>, stderr: impl Into<String>) -> Self {
        Output { code, stdout: stdout.into(), stderr: stderr.into() }
    }

    fn json(code: i32, value: &impl Serialize, stderr: impl Into<String>) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("serialisable");
        text.push('\n');
        Output::new(code, text, stderr)
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Output::new(code, "", format!("error: {message}\n"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Graph6,
    Dimacs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Chi,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Grotzsch,
    SchlafliComplement,
    H,
    Mycielski,
    Random,
    Gnp,
    Cograph,
}

#[derive(Debug, Parser)]
#[command(name = "chibound", version, about = "Certified colouring of (P2+P4, diamond)-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test class membership and print the verdict.
    Check {
        /// Input file, or `-` for stdin.
        input: String,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
    },
    /// Colour within the bound and print the certificate.
    Color {
        input: String,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        emit_certificate: Option<PathBuf>,
    },
    /// Re-check a certificate against a graph.
    Verify {
        input: String,
        certificate: PathBuf,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
    },
    /// Exact chromatic or clique number by exhaustive search.
    Oracle {
        input: String,
        #[arg(long, value_enum)]
        what: Quantity,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Write a generated graph.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Colour and verify seeded random in-class graphs.
    Fuzz {
        /// Largest order; each instance draws its order from `4..=n`.
        #[arg(long, default_value_t = 14)]
        n: usize,
        /// Edge probability; drawn per instance from `[0.05, 0.95)` if absent.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 500)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also run every `.g6` file in this directory.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Largest order compared against the exact oracles.
        #[arg(long, default_value_t = 16)]
        oracle_max: usize,
    },
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Output::new(USAGE, "", text) } else { Output::new(OK, text, "") };
        }
    };
    match cli.command {
        Command::Check { input, format } => with_graph(&input, format, stdin, cmd_check),
        Command::Color { input, format, emit_certificate } => {
            with_graph(&input, format, stdin, |g| cmd_color(g, emit_certificate.as_deref()))
        }
        Command::Verify { input, certificate, format } => {
            with_graph(&input, format, stdin, |g| cmd_verify(g, &certificate))
        }
        Command::Oracle { input, what, format, timeout } => {
            with_graph(&input, format, stdin, |g| cmd_oracle(g, what, timeout))
        }
        Command::Gen { family, n, p, seed, format, out } => cmd_gen(family, n, p, seed, format, out.as_deref()),
        Command::Fuzz { n, p, count, seed, jobs, fixtures, oracle_max } => {
            cmd_fuzz(&FuzzConfig { n, p, count, seed, jobs, fixtures, oracle_max })
        }
    }
}

fn read_input(input: &str, stdin: &mut dyn Read) -> Result<Vec<u8>, String> {
    if input == "-" {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read(input).map_err(|e| format!("{input}: {e}"))
    }
}

pub fn parse_graph(bytes: &[u8], format: Format) -> Result<Graph, IoError> {
    match format {
        Format::Graph6 => parse_graph6(bytes),
        Format::Dimacs => parse_dimacs(&String::from_utf8_lossy(bytes)),
    }
}

fn with_graph(input: &str, format: Format, stdin: &mut dyn Read, f: impl FnOnce(&Graph) -> Output) -> Output {
    let bytes = match read_input(input, stdin) {
        Ok(b) => b,
        Err(e) => return Output::fail(USAGE, e),
    };
    match parse_graph(&bytes, format) {
        Ok(g) => f(&g),
        Err(e) => Output::fail(USAGE, format!("{input}: {e}")),
    }
}

pub fn cmd_check(g: &Graph) -> Output {
    let verdict = class_membership(g);
    let code = if verdict.in_class { OK } else { REJECTED };
    Output::json(code, &verdict, "")
}

#[derive(Debug, Serialize)]
struct Diagnostic<'a> {
    error: &'static str,
    strategy: Strategy,
    property: &'a str,
    detail: &'a str,
    witness: &'a [usize],
    snapshot: &'a [chibound::decomposition::NamedCell],
}

pub fn summary_line(c: &CertificateDocument) -> String {
    format!(
        "omega={} k={} strategy={} colours={} bound={}\n",
        c.omega, c.k, c.strategy, c.colours_used, c.bound
    )
}

pub fn cmd_color(g: &Graph, emit: Option<&Path>) -> Output {
    let outcome = match colour(g) {
        Ok(o) => o,
        Err(EngineError::OutOfClass(w)) => {
            let verdict = chibound::MembershipVerdict { in_class: false, witness: Some(w.clone()) };
            return Output::json(REJECTED, &verdict, format!("error: not in class: {:?} {:?}\n", w.kind, w.vertices));
        }
        Err(EngineError::Input(e)) => return Output::fail(USAGE, e),
        Err(e @ EngineError::TheoryViolation { .. }) => {
            let EngineError::TheoryViolation { strategy, property, detail, witness, snapshot } = &e else {
                unreachable!()
            };
            let diag = Diagnostic { error: "theory-violation", strategy: *strategy, property, detail, witness, snapshot };
            return Output::json(THEORY, &diag, format!("error: {e}\n"));
        }
    };
    let cert = match CertificateDocument::from_outcome(g, &outcome).and_then(|c| write_certificate(&c).map(|t| (c, t))) {
        Ok(pair) => pair,
        Err(e) => return Output::fail(USAGE, e),
    };
    let (doc, mut text) = cert;
    text.push('\n');
    if let Some(path) = emit {
        if let Err(e) = std::fs::write(path, &text) {
            return Output::fail(USAGE, format!("{}: {e}", path.display()));
        }
    }
    Output::new(OK, text, summary_line(&doc))
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    valid: bool,
    reason: Option<String>,
}

/// Check a parsed certificate against `g`; `Err` carries the reason.
pub fn verify_certificate(g: &Graph, c: &CertificateDocument) -> Result<(), String> {
    let g6 = write_graph6(g).map_err(|e| e.to_string())?;
    if c.graph6 != g6 || c.order != g.order() {
        return Err("certificate was issued for a different graph".into());
    }
    let omega = max_clique(g).len();
    if c.omega != omega {
        return Err(format!("certificate claims ω = {}, graph has ω = {omega}", c.omega));
    }
    match verify_colouring(g, &c.colouring) {
        Ok(None) => {}
        Ok(Some((u, v))) => return Err(format!("edge {u}-{v} is monochromatic")),
        Err(e) => return Err(e.to_string()),
    }
    if c.colours_used > bound(omega) || c.bound != bound(omega) {
        return Err(format!("{} colours against bound {} for ω = {omega}", c.colours_used, bound(omega)));
    }
    if !g.is_clique(&g.set(c.a_order.iter().copied())) {
        return Err("a_order is not a clique".into());
    }
    if !g.is_clique(&g.set(c.b_order.iter().copied())) {
        return Err("b_order is not a clique".into());
    }
    Ok(())
}

pub fn cmd_verify(g: &Graph, certificate: &Path) -> Output {
    let text = match std::fs::read_to_string(certificate) {
        Ok(t) => t,
        Err(e) => return Output::fail(USAGE, format!("{}: {e}", certificate.display())),
    };
    let result = match parse_certificate(&text) {
        Ok(c) => verify_certificate(g, &c),
        // malformed JSON is a parse error; a document that parses but breaks
        // an invariant is a failed verification
        Err(IoError::Certificate { field, message }) if field == "<document>" => {
            return Output::fail(USAGE, format!("{}: {message}", certificate.display()));
        }
        Err(e) => Err(e.to_string()),
    };
    match result {
        Ok(()) => Output::json(OK, &VerifyReport { valid: true, reason: None }, ""),
        Err(reason) => {
            let stderr = format!("error: {reason}\n");
            Output::json(REJECTED, &VerifyReport { valid: false, reason: Some(reason) }, stderr)
        }
    }
}

/// Exact-χ vertex cap, from the environment if set.
pub fn oracle_limit() -> usize {
    std::env::var(ORACLE_LIMIT_VAR).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CHI_LIMIT)
}

/// Exact clique number: subset enumeration when small, recursion otherwise.
pub fn oracle_omega(g: &Graph) -> Result<usize, chibound::oracle::OracleError> {
    if g.order() <= CLIQUE_BRUTEFORCE_LIMIT {
        max_clique_bruteforce(g)
    } else {
        clique_number_exact(g, 64)
    }
}

pub fn cmd_oracle(g: &Graph, what: Quantity, timeout: Option<f64>) -> Output {
    let value = match what {
        Quantity::Omega => oracle_omega(g),
        Quantity::Chi => {
            let token = CancelToken::new();
            let done = Arc::new(AtomicBool::new(false));
            if let Some(secs) = timeout {
                let (token, done) = (token.clone(), done.clone());
                let deadline = Instant::now() + Duration::from_secs_f64(secs.max(0.0));
                std::thread::spawn(move || {
                    while !done.load(Ordering::Relaxed) {
                        if Instant::now() >= deadline {
                            token.cancel();
                            return;
                        }
                        std::thread::sleep(Duration::from_millis(10));
                    }
                });
            }
            let r = chromatic_number_exact(g, oracle_limit(), Some(&token));
            done.store(true, Ordering::Relaxed);
            r
        }
    };
    match value {
        Ok(v) => Output::new(OK, format!("{v}\n"), ""),
        Err(e) => Output::fail(REJECTED, e),
    }
}

pub fn generate(family: Family, n: usize, p: f64, seed: u64) -> Result<Graph, String> {
    Ok(match family {
        Family::Grotzsch => grotzsch(),
        Family::SchlafliComplement => schlafli_complement(),
        Family::H => h_n(n).map_err(|e| e.to_string())?,
        Family::Mycielski => mycielskian(&Graph::cycle(n.max(3))),
        Family::Random => random_in_class(n, p, seed),
        Family::Gnp => random_gnp(n, p, seed),
        Family::Cograph => random_cograph(n.max(1), seed),
    })
}

pub fn cmd_gen(family: Family, n: usize, p: f64, seed: u64, format: Format, out: Option<&Path>) -> Output {
    if !(0.0..=1.0).contains(&p) {
        return Output::fail(USAGE, format!("--p must lie in [0, 1], got {p}"));
    }
    let g = match generate(family, n, p, seed) {
        Ok(g) => g,
        Err(e) => return Output::fail(USAGE, e),
    };
    let text = match format {
        Format::Graph6 => match write_graph6(&g) {
            Ok(s) => s + "\n",
            Err(e) => return Output::fail(USAGE, e),
        },
        Format::Dimacs => write_dimacs(&g),
    };
    match out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Output::new(OK, "", ""),
            Err(e) => Output::fail(USAGE, format!("{}: {e}", path.display())),
        },
        None => Output::new(OK, text, ""),
    }
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub n: usize,
    pub p: Option<f64>,
    pub count: u64,
    pub seed: u64,
    pub jobs: usize,
    pub fixtures: Option<PathBuf>,
    pub oracle_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub graph6: String,
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub instances: u64,
    pub fixtures: u64,
    pub seed: u64,
    pub oracle_checked: u64,
    pub strategies: BTreeMap<String, u64>,
    pub omega_histogram: BTreeMap<usize, u64>,
    pub tight_omega_ge_4: u64,
    pub theory_violations: u64,
    pub failures: Vec<Failure>,
}

struct Single {
    strategy: Option<Strategy>,
    omega: Option<usize>,
    oracle_checked: bool,
    tight: bool,
    failure: Option<Failure>,
}

/// Colour, certify, re-verify and (when small) compare with the oracles.
fn check_instance(name: String, g: &Graph, oracle_max: usize) -> Single {
    let graph6 = write_graph6(g).unwrap_or_default();
    let fail = |kind: &'static str, detail: String| Single {
        strategy: None,
        omega: None,
        oracle_checked: false,
        tight: false,
        failure: Some(Failure { instance: name.clone(), graph6: graph6.clone(), kind, detail }),
    };
    let outcome = match colour(g) {
        Ok(o) => o,
        Err(e @ EngineError::TheoryViolation { .. }) => return fail("theory-violation", e.to_string()),
        Err(e) => return fail("engine", e.to_string()),
    };
    let checked = CertificateDocument::from_outcome(g, &outcome)
        .and_then(|c| write_certificate(&c))
        .map_err(|e| e.to_string())
        .and_then(|text| parse_certificate(&text).map_err(|e| e.to_string()))
        .and_then(|c| verify_certificate(g, &c));
    if let Err(e) = checked {
        return fail("verify", e);
    }
    let used = outcome.colouring.colours_used;
    if outcome.omega >= 4 && used != outcome.omega {
        return fail("bound", format!("ω = {} but {used} colours", outcome.omega));
    }
    let mut oracle_checked = false;
    if g.order() <= oracle_max {
        match (chromatic_number_exact(g, 64, None), oracle_omega(g)) {
            (Ok(chi), Ok(omega)) => {
                if omega != outcome.omega {
                    return fail("oracle", format!("engine ω = {}, oracle ω = {omega}", outcome.omega));
                }
                if chi > used {
                    return fail("oracle", format!("{used} colours below χ = {chi}"));
                }
                if outcome.omega >= 4 && chi != used {
                    return fail("oracle", format!("χ = {chi} but {used} colours"));
                }
                oracle_checked = true;
            }
            (Err(e), _) | (_, Err(e)) => return fail("oracle", e.to_string()),
        }
    }
    Single {
        strategy: Some(outcome.strategy),
        omega: Some(outcome.omega),
        oracle_checked,
        tight: outcome.omega >= 4 && used == outcome.omega,
        failure: None,
    }
}

/// The `i`-th fuzz instance for `seed`: order in `4..=n` (or `n` if
/// smaller), probability `p` or uniform in `[0.05, 0.95)`.
pub fn fuzz_instance(seed: u64, i: u64, n: usize, p: Option<f64>) -> Graph {
    let mut rng = Rng::new(Rng::derive(seed, i));
    let order = rng.range(n.min(4), n);
    let prob = p.unwrap_or_else(|| 0.05 + 0.9 * rng.next_f64());
    random_in_class(order, prob, rng.next_u64())
}

fn load_fixtures(dir: &Path) -> Result<Vec<(String, Graph)>, String> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "g6"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let g = parse_graph6(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
            let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, g))
        })
        .collect()
}

pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzReport, String> {
    if let Some(p) = cfg.p {
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("--p must lie in [0, 1], got {p}"));
        }
    }
    let fixtures = match &cfg.fixtures {
        Some(dir) => load_fixtures(dir)?,
        None => Vec::new(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let results: Vec<Single> = pool.install(|| {
        let fixed: Vec<Single> =
            fixtures.par_iter().map(|(name, g)| check_instance(name.clone(), g, cfg.oracle_max)).collect();
        let random: Vec<Single> = (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let g = fuzz_instance(cfg.seed, i, cfg.n, cfg.p);
                check_instance(format!("seed {} #{i}", cfg.seed), &g, cfg.oracle_max)
            })
            .collect();
        fixed.into_iter().chain(random).collect()
    });
    let mut report = FuzzReport {
        instances: cfg.count,
        fixtures: fixtures.len() as u64,
        seed: cfg.seed,
        oracle_checked: 0,
        strategies: Strategy::ALL.iter().map(|s| (s.id().to_string(), 0)).collect(),
        omega_histogram: BTreeMap::new(),
        tight_omega_ge_4: 0,
        theory_violations: 0,
        failures: Vec::new(),
    };
    for r in results {
        if let Some(s) = r.strategy {
            *report.strategies.entry(s.id().to_string()).or_default() += 1;
        }
        if let Some(w) = r.omega {
            *report.omega_histogram.entry(w).or_default() += 1;
        }
        report.oracle_checked += r.oracle_checked as u64;
        report.tight_omega_ge_4 += r.tight as u64;
        if let Some(f) = r.failure {
            report.theory_violations += (f.kind == "theory-violation") as u64;
            report.failures.push(f);
        }
    }
    Ok(report)
}

pub fn cmd_fuzz(cfg: &FuzzConfig) -> Output {
    let start = Instant::now();
    let report = match fuzz(cfg) {
        Ok(r) => r,
        Err(e) => return Output::fail(USAGE, e),
    };
    let code = if report.theory_violations > 0 {
        THEORY
    } else if !report.failures.is_empty() {
        REJECTED
    } else {
        OK
    };
    let strategies: Vec<String> = report.strategies.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let stderr = format!(
        "instances={} fixtures={} failures={} oracle_checked={} elapsed={:.2}s\nstrategies {}\n",
        report.instances,
        report.fixtures,
        report.failures.len(),
        report.oracle_checked,
        start.elapsed().as_secs_f64(),
        strategies.join(" ")
    );
    Output::json(code, &report, stderr)
}
