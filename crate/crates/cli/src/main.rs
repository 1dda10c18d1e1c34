//! `semigrowth` command-line tool.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 bad input or usage.

mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use semigrowth::families::ExampleFamily;
use semigrowth::geometry::{self, Simplex, WedgeSystem};
use semigrowth::growth::{self, HilbertBound};
use semigrowth::plane::{self, GapCheck};
use semigrowth::{parse_list, Error, Execution, Rational, SemigroupSpec};

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "semigrowth", version, about = "Growth of rational value semigroups, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format (default depends on the subcommand)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; `-` forces stdout. Defaults to $SEMIGROWTH_OUT_DIR/<command>.<ext> when set
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the parallel core
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every computation on the calling thread
    #[arg(long, global = true)]
    sequential: bool,
}

/// A semigroup given by raw values or by a named family.
#[derive(Args, Debug, Clone)]
struct Source {
    /// Comma-separated generators, e.g. "1,9/2,65/4"
    #[arg(long, conflicts_with = "family")]
    values: Option<String>,
    /// exf1 | power:p,q | quadratic | nlog
    #[arg(long)]
    family: Option<ExampleFamily>,
    /// Number of family levels after a_0 = 1
    #[arg(long, requires = "family")]
    levels: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the semigroup elements below a bound
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        bound: Rational,
    },
    /// Table of phi(n) = |S ∩ (0,n)|
    Phi {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        nmax: u64,
    },
    /// Plane-valuation criterion: s_i = q_i and a_{i+1} > q_i a_i
    Criterion {
        #[command(flatten)]
        source: Source,
    },
    /// phi(n) against the Hilbert-Samuel length of a regular ring of dimension d
    Bounds {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = 2, conflicts_with = "cusp")]
        d: u64,
        /// Compare with the cusp length 2n - 1 instead
        #[arg(long)]
        cusp: bool,
    },
    /// Two-sided growth inequalities of a named family
    Examples {
        #[arg(long)]
        family: ExampleFamily,
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long)]
        nmax: u64,
    },
    /// phi(n)/n^d < e / (d! s_1 ... s_d) on a range
    Corn1 {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        start: u64,
        #[arg(long)]
        nmax: u64,
    },
    /// psi(n) = binom(n+1,2) - 1 - phi(n) and psi(n)/n^2
    Psi {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        start: u64,
        #[arg(long)]
        nmax: u64,
        /// Fail unless psi(n)/n^2 > this value on the whole range
        #[arg(long)]
        min_ratio: Option<Rational>,
    },
    /// Integer points of the wedge system or of a coordinate simplex
    LatticeCount {
        #[arg(long)]
        weights: String,
        #[arg(long, default_value = "0")]
        alpha: Rational,
        #[arg(long, required_unless_present = "sweep", conflicts_with = "sweep")]
        n: Option<u64>,
        /// start:end:step
        #[arg(long)]
        sweep: Option<String>,
        /// Count the closed simplex with these intercepts instead (Ehrhart count)
        #[arg(long, conflicts_with_all = ["sweep", "alpha"])]
        simplex: bool,
    },
    /// Monomial curve realizing a finitely generated semigroup
    Realize {
        #[arg(long)]
        generators: String,
    },
    /// Truncated semigroup with at least n^n elements below n
    Counterexample {
        #[arg(long, default_value_t = 4)]
        levels: u32,
    },
    /// Fit power-law and n log n models to phi
    Fit {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        nmax: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Phi { .. } => "phi",
            Command::Criterion { .. } => "criterion",
            Command::Bounds { .. } => "bounds",
            Command::Examples { .. } => "examples",
            Command::Corn1 { .. } => "corn1",
            Command::Psi { .. } => "psi",
            Command::LatticeCount { .. } => "lattice-count",
            Command::Realize { .. } => "realize",
            Command::Counterexample { .. } => "counterexample",
            Command::Fit { .. } => "fit",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Phi { .. } => Format::Csv,
            Command::LatticeCount { sweep: Some(_), .. } => Format::Csv,
            Command::LatticeCount { .. } => Format::Text,
            _ => Format::Json,
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<Report, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

impl Source {
    /// Generators of the semigroup; families without `--levels` cover `(0, n_max)`.
    fn generators(&self, n_max: Option<u64>) -> Result<Vec<Rational>, Failure> {
        match (&self.values, self.family) {
            (Some(v), None) => Ok(parse_list(v)?),
            (None, Some(f)) => {
                let levels = match (self.levels, n_max) {
                    (Some(k), _) => k,
                    (None, Some(n)) => f.required_levels(n),
                    (None, None) => return usage("--levels is required with --family"),
                };
                Ok(f.values(levels)?)
            }
            _ => usage("give exactly one of --values or --family"),
        }
    }

    fn semigroup(&self, n_max: Option<u64>, exec: Execution) -> Result<SemigroupSpec, Failure> {
        Ok(SemigroupSpec::new(self.generators(n_max)?)?.with_execution(exec))
    }
}

fn join(values: &[Rational]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct Enumeration {
    generators: Vec<Rational>,
    bound: Rational,
    count: usize,
    elements: Vec<Rational>,
}

fn enumerate(source: &Source, bound: &Rational, exec: Execution) -> CmdResult {
    let mut s = source.semigroup(Some(bound.ceil().try_into().unwrap_or(u64::MAX)), exec)?;
    let elements = s.enumerate(bound)?;
    let csv = elements.iter().fold(String::from("element\n"), |mut acc, e| {
        let _ = writeln!(acc, "{e}");
        acc
    });
    let text = format!("{}\n", join(&elements));
    let out = Enumeration { generators: s.generators().to_vec(), bound: bound.clone(), count: elements.len(), elements };
    Ok(Report::new(&out, text, true).with_csv(csv))
}

fn phi(source: &Source, nmax: u64, exec: Execution) -> CmdResult {
    let mut s = source.semigroup(Some(nmax), exec)?;
    let table = s.count_table(nmax)?;
    let text = table.rows.iter().fold(String::new(), |mut acc, r| {
        let _ = writeln!(acc, "phi({}) = {}  [{} in [{}, {})]", r.n, r.phi, r.interval, r.n - 1, r.n);
        acc
    });
    Ok(Report::new(&table, text, true).with_csv(table.to_csv()))
}

fn criterion(source: &Source) -> CmdResult {
    if source.family.is_some() && source.levels.is_none() {
        return usage("--levels is required with --family");
    }
    let report = plane::check_plane_criterion(&source.generators(None)?)?;
    let mut text = format!("input: {}\n", join(&report.input));
    if !report.redundant.is_empty() {
        let _ = writeln!(text, "redundant: {}", join(&report.redundant));
    }
    if !report.order_violations.is_empty() {
        let _ = writeln!(text, "not increasing at positions: {:?}", report.order_violations);
    }
    for l in &report.levels {
        let gap = match l.gap {
            GapCheck::Pass => "pass",
            GapCheck::Fail => "FAIL",
            GapCheck::NotCheckable => "not checkable at this truncation",
        };
        let eq = if l.pass_equality { "pass" } else { "FAIL" };
        let _ = writeln!(text, "level {}: a = {}, q = {}, s = {} (s = q: {eq}), gap: {gap}", l.level, l.value, l.q, l.s);
    }
    for f in &report.failures {
        let _ = writeln!(text, "failure at level {} ({:?}): {}", f.level, f.condition, f.detail);
    }
    let _ = writeln!(text, "overall: {}", if report.pass { "PASS" } else { "FAIL" });
    Ok(Report::new(&report, text, report.pass))
}

fn bounds(source: &Source, nmax: u64, d: u64, cusp: bool, exec: Execution) -> CmdResult {
    let mut s = source.semigroup(Some(nmax), exec)?;
    let bound = if cusp { HilbertBound::Cusp } else { HilbertBound::Regular { d } };
    if d == 0 {
        return usage("--d must be at least 1");
    }
    let report = growth::check_bounds_with(&mut s, bound, nmax)?;
    Ok(Report::new(&report, report.summary(), report.pass))
}

fn examples(family: ExampleFamily, levels: Option<u32>, nmax: u64) -> CmdResult {
    let levels = levels.unwrap_or_else(|| family.required_levels(nmax));
    let report = growth::check_example_inequalities(family, levels, nmax)?;
    Ok(Report::new(&report, report.summary(), report.pass))
}

fn corn1(source: &Source, d: u64, e: u64, start: u64, nmax: u64, exec: Execution) -> CmdResult {
    let mut s = source.semigroup(Some(nmax), exec)?;
    let report = growth::check_corn1(&mut s, d, e, start, nmax)?;
    let text = format!(
        "smallest elements: {}\nbound: {}\n{}\n{}\n",
        join(&report.smallest),
        report.bound,
        report.check.summary_line(),
        report.note
    );
    Ok(Report::new(&report, text, report.check.pass))
}

#[derive(Serialize)]
struct PsiOutput {
    #[serde(flatten)]
    report: growth::PsiReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<Rational>,
    pass: bool,
}

fn psi(source: &Source, start: u64, nmax: u64, min_ratio: Option<Rational>, exec: Execution) -> CmdResult {
    let mut s = source.semigroup(Some(nmax), exec)?;
    let report = growth::deviation_psi(&mut s, start, nmax)?;
    let pass = min_ratio.as_ref().is_none_or(|t| &report.min_ratio > t);
    let mut csv = String::from("n,phi,psi,ratio\n");
    for r in &report.rows {
        let _ = writeln!(csv, "{},{},{},{}", r.n, r.phi, r.psi, r.ratio);
    }
    let mut text = format!(
        "a1 = {}, floor (1/2)(1 - 1/a1) = {}\nmin psi(n)/n^2 = {} (~{:.6}) at n = {}\n",
        report.a1,
        report.floor.value,
        report.min_ratio,
        report.min_ratio.to_f64(),
        report.min_ratio_at
    );
    if let Some(t) = &min_ratio {
        let _ = writeln!(text, "psi(n)/n^2 > {t} on {start}..={nmax}: {}", if pass { "PASS" } else { "FAIL" });
    }
    let _ = writeln!(text, "{}", report.note);
    Ok(Report::new(&PsiOutput { report, threshold: min_ratio, pass }, text, pass).with_csv(csv))
}

#[derive(Serialize)]
struct LatticeOutput {
    kind: &'static str,
    weights: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Rational>,
    n: u64,
    count: u64,
    ratio: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    volume: Option<Rational>,
}

#[derive(Serialize)]
struct SweepOutput {
    weights: Vec<Rational>,
    alpha: Rational,
    rows: Vec<geometry::SweepRow>,
}

fn parse_sweep(s: &str) -> Result<(u64, u64, u64), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Option<Vec<u64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums.as_deref() {
        Some(&[a, b, c]) => Ok((a, b, c)),
        _ => usage(format!("--sweep expects start:end:step, got {s:?}")),
    }
}

fn lattice_count(
    weights: &str,
    alpha: Rational,
    n: Option<u64>,
    sweep: Option<&str>,
    simplex: bool,
    exec: Execution,
) -> CmdResult {
    let weights = parse_list(weights)?;
    if let Some(spec) = sweep {
        let (start, end, step) = parse_sweep(spec)?;
        let rows = geometry::wedge_sweep(&weights, &alpha, start, end, step, exec)?;
        let csv = geometry::sweep_csv(&rows);
        let text = rows.iter().fold(String::new(), |mut acc, r| {
            let _ = writeln!(acc, "n = {}: {} points, ratio {}", r.n, r.count, r.ratio);
            acc
        });
        return Ok(Report::new(&SweepOutput { weights, alpha, rows }, text, true).with_csv(csv));
    }
    let n = n.expect("clap requires --n without --sweep");
    let out = if simplex {
        let simplex = Simplex::new(weights.clone())?;
        let count = simplex.ehrhart(n, exec)?;
        let ratio = if n == 0 { Rational::zero() } else { simplex.ehrhart_ratio(n)? };
        LatticeOutput { kind: "simplex", weights, alpha: None, n, count, ratio, volume: Some(simplex.volume()) }
    } else {
        let system = WedgeSystem::new(weights.clone(), alpha.clone(), n)?;
        let count = system.count_with(exec)?;
        LatticeOutput { kind: "wedge", weights, alpha: Some(alpha), n, count, ratio: system.ratio(count), volume: None }
    };
    let csv = format!("n,count,ratio\n{},{},{}\n", out.n, out.count, out.ratio);
    Ok(Report::new(&out, format!("{}\n", out.count), true).with_csv(csv))
}

fn realize(generators: &str) -> CmdResult {
    let curve = plane::realize_monomial_curve(&parse_list(generators)?)?;
    let exps: Vec<String> = curve.exponents.iter().map(|e| format!("t^{e}")).collect();
    let text = format!("alpha = {}\nexponents: {}\n", curve.alpha, exps.join(", "));
    Ok(Report::new(&curve, text, true))
}

fn counterexample(levels: u32) -> CmdResult {
    let cx = growth::counterexample_semigroup(levels)?;
    let dense = cx.checkpoints.iter().all(|c| c.t_count >= c.n_pow_n);
    let beats_cubic = cx.binomial_checks.iter().any(|b| b.predicate.contains(", 3)") && !b.pass);
    let mut text = format!("{} generators on grids 2^{:?}\n", cx.generator_count, cx.grid_exponents);
    for c in &cx.checkpoints {
        let _ = writeln!(text, "n = {}: |T ∩ (0,n)| = {} >= n^n = {}, phi_U = {}", c.n, c.t_count, c.n_pow_n, c.phi);
    }
    for b in &cx.binomial_checks {
        let _ = writeln!(text, "{}", b.summary_line());
    }
    Ok(Report::new(&cx, text, dense && beats_cubic))
}

fn fit(source: &Source, nmax: u64, exec: Execution) -> CmdResult {
    let mut s = source.semigroup(Some(nmax), exec)?;
    let table = s.count_table(nmax)?;
    let model = growth::fit_growth(&table)?;
    Ok(Report::new(&model, format!("{}\n", model.summary_line()), true))
}

fn dispatch(cmd: &Command, exec: Execution) -> CmdResult {
    match cmd {
        Command::Enumerate { source, bound } => enumerate(source, bound, exec),
        Command::Phi { source, nmax } => phi(source, *nmax, exec),
        Command::Criterion { source } => criterion(source),
        Command::Bounds { source, nmax, d, cusp } => bounds(source, *nmax, *d, *cusp, exec),
        Command::Examples { family, levels, nmax } => examples(*family, *levels, *nmax),
        Command::Corn1 { source, d, e, start, nmax } => corn1(source, *d, *e, *start, *nmax, exec),
        Command::Psi { source, start, nmax, min_ratio } => psi(source, *start, *nmax, min_ratio.clone(), exec),
        Command::LatticeCount { weights, alpha, n, sweep, simplex } => {
            lattice_count(weights, alpha.clone(), *n, sweep.as_deref(), *simplex, exec)
        }
        Command::Realize { generators } => realize(generators),
        Command::Counterexample { levels } => counterexample(*levels),
        Command::Fit { source, nmax } => fit(source, *nmax, exec),
    }
}

fn error_exit(kind: &str, msg: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "status": "error", "kind": kind, "message": msg }));
    ExitCode::from(code)
}

fn run(cli: Cli) -> ExitCode {
    if let Some(threads) = cli.global.threads {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            return error_exit("usage", &format!("cannot configure {threads} threads: {e}"), 2);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = threads;
    }
    let exec = if cli.global.sequential { Execution::Sequential } else { Execution::default() };
    let name = cli.command.name();
    let format = cli.global.format.unwrap_or_else(|| cli.command.default_format());

    let report = match dispatch(&cli.command, exec) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => return error_exit("usage", &msg, 2),
        Err(Failure::Lib(e)) => {
            return match e {
                Error::Internal(msg) => error_exit("internal", &msg, 1),
                Error::Parse(_) => error_exit("parse", &e.to_string(), 2),
                Error::Input(_) => error_exit("input", &e.to_string(), 2),
                Error::TooLarge(_) => error_exit("too_large", &e.to_string(), 2),
            }
        }
    };
    let Some(body) = report.render(format) else {
        return error_exit("usage", &format!("{name} has no {format} output"), 2);
    };
    let dest = output::destination(cli.global.output.as_deref(), name, format);
    if let Err(e) = output::write(&body, dest.as_deref()) {
        return error_exit("io", &e.to_string(), 2);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("{}", json!({ "status": "fail", "command": name, "detail": report.json }));
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
