//! The `frel` command line: argument parsing, dispatch and report rendering.

pub mod document;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use frel_core::oracle::MAX_EXHAUSTIVE_N;
use frel_core::{
    canonical_mcs, chebyshev_report, chebyshev_report_with_witness, check_consistency,
    enumerate_consistent_maxmin, greatest_approximation, maximal_consistent_maxmin,
    maximal_consistent_maxmin_incremental, oracle_distance_bisection, oracle_enumerate,
    random_system, Error, IndexSet, OracleConfig, System, TNormKind,
};

use crate::document::{load_csv, resolve_tnorm, SystemDocument};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INCONSISTENT: u8 = 2;
pub const EXIT_NO_SOLVABLE: u8 = 3;
pub const EXIT_UNSUPPORTED: u8 = 4;
pub const EXIT_DISAGREE: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "frel", version, about = "Diagnose systems of max-T fuzzy relational equations")]
pub struct Cli {
    /// Absolute tolerance for zero and equality tests.
    #[arg(long, global = true, env = "FREL_EPSILON", default_value_t = frel_core::DEFAULT_EPSILON)]
    pub epsilon: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    pub output: OutputMode,

    /// Agreement tolerance (and bisection width) for `verify`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Text,
    Machine,
}

#[derive(Debug, Args)]
pub struct Input {
    /// System document (JSON with fields `tnorm`, `A`, `b`).
    #[arg(required_unless_present = "csv", conflicts_with = "csv")]
    pub file: Option<PathBuf>,

    /// Read A and b from two CSV files instead.
    #[arg(long, num_args = 2, value_names = ["A_CSV", "B_CSV"], requires = "tnorm")]
    pub csv: Option<Vec<PathBuf>>,

    /// T-norm: min, product or lukasiewicz. Overrides the document's.
    #[arg(long)]
    pub tnorm: Option<String>,
}

impl Input {
    fn load(&self) -> Result<System> {
        match (&self.file, &self.csv) {
            (Some(path), _) => SystemDocument::load(path)?.to_system(self.tnorm.as_deref()),
            (None, Some(files)) => {
                let tnorm = self.tnorm.as_deref().unwrap_or_default();
                load_csv(&files[0], &files[1], tnorm)?.to_system(None)
            }
            (None, None) => bail!("no input given"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greatest-solution consistency test. Exit 2 when inconsistent.
    Check(Input),
    /// Chebyshev distance, per-row defects and N_c.
    Distance {
        #[command(flatten)]
        input: Input,
        /// Also report, per row, the column attaining δ_i and the row driving it.
        #[arg(long)]
        witness: bool,
    },
    /// Greatest Chebyshev approximation of the right-hand side.
    Approx(Input),
    /// Canonical maximal consistent subsystem. Exit 3 if no equation is solvable alone.
    Mcs(Input),
    /// All consistent subsystems of a max-min system. Exit 4 for other t-norms.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        maximal_only: bool,
    },
    /// Cross-check the analytical results against brute-force oracles. Exit 5 on disagreement.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Cap on the number of equations for exhaustive subset checks.
        #[arg(long, default_value_t = 16)]
        max_exhaustive: usize,
    },
    /// Print a reproducible random system document.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value = "min")]
        tnorm: String,
        #[arg(long, default_value_t = 0.05)]
        grid: f64,
    },
}

/// Rounds to 10 significant digits.
pub fn sig(x: f64) -> f64 {
    format!("{x:.9e}").parse().unwrap_or(x)
}

fn sig_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| sig(x)).collect()
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| sig(x).to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn sets_json(sets: &[IndexSet]) -> Value {
    Value::from(sets.iter().map(IndexSet::to_one_based).collect::<Vec<_>>())
}

fn sets_text(sets: &[IndexSet]) -> String {
    sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// What a command produced: text and machine renderings plus the exit code.
struct Report {
    text: String,
    machine: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, machine: Value) -> Self {
        Self { text, machine, code: EXIT_OK }
    }
}

pub fn run(cli: Cli) -> ExitCode {
    if cli.epsilon.is_nan() || cli.epsilon < 0.0 {
        eprintln!("error: --epsilon must be non-negative");
        return ExitCode::from(EXIT_INPUT);
    }
    match dispatch(&cli) {
        Ok(report) => {
            match cli.output {
                OutputMode::Text => print!("{}", report.text),
                OutputMode::Machine => println!("{}", report.machine),
            }
            ExitCode::from(report.code)
        }
        Err(Failure { message, code }) => {
            eprintln!("error: {message}");
            if cli.output == OutputMode::Machine {
                println!("{}", json!({ "error": message, "exit_code": code }));
            }
            ExitCode::from(code)
        }
    }
}

struct Failure {
    message: String,
    code: u8,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self { message: format!("{e:#}"), code: EXIT_INPUT }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoSolvableEquation => EXIT_NO_SOLVABLE,
            Error::UnsupportedTNorm { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_INPUT,
        };
        Self { message: e.to_string(), code }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let eps = cli.epsilon;
    match &cli.command {
        Command::Check(input) => Ok(check(&input.load()?, eps)),
        Command::Distance { input, witness } => Ok(distance(&input.load()?, eps, *witness)),
        Command::Approx(input) => approx(&input.load()?, eps),
        Command::Mcs(input) => mcs(&input.load()?, eps),
        Command::Enumerate { input, maximal_only } => {
            let system = input.load()?;
            if system.tnorm() != TNormKind::Min {
                return Err(Failure {
                    message: format!(
                        "enumeration of consistent subsystems is only available for the min t-norm, not {}",
                        system.tnorm()
                    ),
                    code: EXIT_UNSUPPORTED,
                });
            }
            enumerate(&system, eps, *maximal_only)
        }
        Command::Verify { input, max_exhaustive } => {
            if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
                return Err(anyhow::anyhow!("--tolerance must be positive").into());
            }
            verify(&input.load()?, eps, cli.tolerance, *max_exhaustive)
        }
        Command::Random { seed, rows, cols, tnorm, grid } => {
            let kind = resolve_tnorm(tnorm)?;
            let system = random_system(*seed, *rows, *cols, kind, *grid)?;
            let doc = SystemDocument::from_system(&system);
            let machine = serde_json::to_value(&doc).map_err(anyhow::Error::from)?;
            Ok(Report::ok(doc.to_canonical_json(), machine))
        }
    }
}

fn check(system: &System, eps: f64) -> Report {
    let c = check_consistency(system, eps);
    let mut text = String::new();
    let _ = writeln!(text, "t-norm:     {}", system.tnorm());
    let _ = writeln!(text, "consistent: {}", if c.consistent { "yes" } else { "no" });
    let _ = writeln!(text, "e:          {}", fmt_vec(&c.e));
    let _ = writeln!(text, "A □ e:      {}", fmt_vec(&c.image));
    let _ = writeln!(text, "b:          {}", fmt_vec(system.rhs()));
    let machine = json!({
        "command": "check",
        "tnorm": system.tnorm().name(),
        "consistent": c.consistent,
        "e": sig_vec(&c.e),
        "image": sig_vec(&c.image),
    });
    Report { text, machine, code: if c.consistent { EXIT_OK } else { EXIT_INCONSISTENT } }
}

fn distance(system: &System, eps: f64, witness: bool) -> Report {
    let r = if witness {
        chebyshev_report_with_witness(system, eps)
    } else {
        chebyshev_report(system, eps)
    };
    let mut text = String::new();
    let _ = writeln!(text, "t-norm: {}", system.tnorm());
    let _ = writeln!(text, "Δ = {}", sig(r.delta));
    let _ = writeln!(text, "N_c = {}", r.nc);
    let _ = writeln!(text, "row  δ_i{}", if witness { "  (column j, row k)" } else { "" });
    for (i, &d) in r.row_defects.iter().enumerate() {
        let _ = write!(text, "{:<4} {}", i + 1, sig(d));
        if let Some(w) = &r.witness {
            let _ = write!(text, "  (j = {}, k = {})", w.best_column[i] + 1, w.worst_row[i] + 1);
        }
        text.push('\n');
    }
    let mut machine = json!({
        "command": "distance",
        "tnorm": system.tnorm().name(),
        "delta": sig(r.delta),
        "row_defects": sig_vec(&r.row_defects),
        "nc": r.nc.to_one_based(),
    });
    if let Some(w) = &r.witness {
        let rows: Vec<Value> = (0..system.n())
            .map(|i| {
                json!({
                    "row": i + 1,
                    "column": w.best_column[i] + 1,
                    "k": w.worst_row[i] + 1,
                    "table": sig_vec(&w.table[i]),
                })
            })
            .collect();
        machine["witness"] = Value::from(rows);
    }
    Report::ok(text, machine)
}

fn approx(system: &System, eps: f64) -> Result<Report, Failure> {
    let r = greatest_approximation(system, eps)?;
    let mut text = String::new();
    let _ = writeln!(text, "t-norm:   {}", system.tnorm());
    let _ = writeln!(text, "Δ =       {}", sig(r.distance));
    let _ = writeln!(text, "b:        {}", fmt_vec(system.rhs()));
    let _ = writeln!(text, "F(b̄(Δ)):  {}", fmt_vec(&r.approx));
    let machine = json!({
        "command": "approx",
        "tnorm": system.tnorm().name(),
        "delta": sig(r.distance),
        "approx": sig_vec(&r.approx),
    });
    Ok(Report::ok(text, machine))
}

fn mcs(system: &System, eps: f64) -> Result<Report, Failure> {
    let cert = canonical_mcs(system, eps)?;
    let mut text = String::new();
    let _ = writeln!(text, "t-norm: {}", system.tnorm());
    let _ = writeln!(text, "N_c = {}", cert.nc);
    let _ = writeln!(text, "Δ_(N_c) = {}", sig(cert.delta_nc));
    for &(k, d) in &cert.augmented {
        let _ = writeln!(text, "Δ_(N_c ∪ {{{}}}) = {}", k + 1, sig(d));
    }
    let augmented: Vec<Value> =
        cert.augmented.iter().map(|&(k, d)| json!({ "row": k + 1, "delta": sig(d) })).collect();
    let machine = json!({
        "command": "mcs",
        "tnorm": system.tnorm().name(),
        "nc": cert.nc.to_one_based(),
        "delta_nc": sig(cert.delta_nc),
        "augmented": augmented,
    });
    Ok(Report::ok(text, machine))
}

fn enumerate(system: &System, eps: f64, maximal_only: bool) -> Result<Report, Failure> {
    let family = enumerate_consistent_maxmin(system, eps)?;
    let maximal = family.maximal();
    let listed = if maximal_only { maximal.clone() } else { family.sorted() };
    let mut text = String::new();
    let label = if maximal_only { "maximal consistent subsystems" } else { "consistent subsystems" };
    let _ = writeln!(text, "{label} ({}):", listed.len());
    for set in &listed {
        let _ = writeln!(text, "  {set}");
    }
    if !maximal_only {
        let _ = writeln!(text, "maximal: {}", sets_text(&maximal));
    }
    let excluded = if family.excluded.is_empty() { "none".to_string() } else { family.excluded.to_string() };
    let _ = writeln!(text, "excluded (unsolvable alone): {excluded}");
    let machine = json!({
        "command": "enumerate",
        "tnorm": system.tnorm().name(),
        "maximal_only": maximal_only,
        "count": listed.len(),
        "sets": sets_json(&listed),
        "maximal": sets_json(&maximal),
        "excluded": family.excluded.to_one_based(),
    });
    Ok(Report::ok(text, machine))
}

fn verify(system: &System, eps: f64, tolerance: f64, max_exhaustive: usize) -> Result<Report, Failure> {
    let cap = max_exhaustive.min(MAX_EXHAUSTIVE_N);
    let cfg = OracleConfig { tolerance, max_exhaustive_n: cap, epsilon: eps, ..Default::default() };
    let mut checks: Vec<(String, bool, String)> = Vec::new();

    let analytic = chebyshev_report(system, eps);
    let bisected = oracle_distance_bisection(system, &cfg)?;
    let gap = (analytic.delta - bisected).abs();
    checks.push((
        "distance: analytic vs bisection".into(),
        gap <= tolerance.max(eps),
        format!("{} vs {} (gap {:.3e})", sig(analytic.delta), sig(bisected), gap),
    ));

    let consistent = check_consistency(system, eps).consistent;
    checks.push((
        "Δ = 0 iff consistent".into(),
        (analytic.delta <= eps) == consistent,
        format!("Δ = {}, consistent = {consistent}", sig(analytic.delta)),
    ));

    match greatest_approximation(system, eps) {
        Ok(r) => checks.push(("greatest approximation postcondition".into(), true, fmt_vec(&r.approx))),
        Err(e) => checks.push(("greatest approximation postcondition".into(), false, e.to_string())),
    }

    if system.n() <= cap {
        let exhaustive = oracle_enumerate(system, &cfg)?;
        let exhaustive_maximal = exhaustive.maximal();
        match canonical_mcs(system, eps) {
            Ok(cert) => checks.push((
                "N_c is a maximal consistent subsystem".into(),
                cert.holds(eps) && exhaustive_maximal.contains(&cert.nc),
                format!("N_c = {}", cert.nc),
            )),
            Err(Error::NoSolvableEquation) => checks.push((
                "no equation solvable alone".into(),
                exhaustive.is_empty(),
                format!("exhaustive family has {} sets", exhaustive.len()),
            )),
            Err(e) => return Err(e.into()),
        }
        if system.tnorm() == TNormKind::Min {
            let family = enumerate_consistent_maxmin(system, eps)?;
            checks.push((
                "family: incremental vs exhaustive".into(),
                family.same_sets(&exhaustive),
                format!("{} vs {} sets", family.len(), exhaustive.len()),
            ));
            let by_filter = maximal_consistent_maxmin(system, eps)?;
            let by_stage = maximal_consistent_maxmin_incremental(system, eps)?;
            checks.push((
                "maximal sets: inclusion filter vs stage test vs exhaustive".into(),
                by_filter == by_stage && by_filter == exhaustive_maximal,
                sets_text(&by_filter),
            ));
        }
    } else {
        checks.push((
            "exhaustive checks".into(),
            true,
            format!("skipped: {} equations exceeds cap {cap}", system.n()),
        ));
    }

    let agree = checks.iter().all(|(_, ok, _)| *ok);
    let mut text = String::new();
    for (name, ok, detail) in &checks {
        let _ = writeln!(text, "[{}] {name}: {detail}", if *ok { "ok" } else { "MISMATCH" });
    }
    let _ = writeln!(text, "{}", if agree { "all checks agree" } else { "checks disagree" });
    let machine = json!({
        "command": "verify",
        "tnorm": system.tnorm().name(),
        "agree": agree,
        "checks": checks
            .iter()
            .map(|(name, ok, detail)| json!({ "name": name, "ok": ok, "detail": detail }))
            .collect::<Vec<_>>(),
    });
    Ok(Report { text, machine, code: if agree { EXIT_OK } else { EXIT_DISAGREE } })
}
