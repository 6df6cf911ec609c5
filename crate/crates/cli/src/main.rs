use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use orbitlab::dynamics::Mode;
use orbitlab::reports::{reproduce_suite, run, Manifest, ProblemFile, ProblemKind, RunOptions};

/// Exact intersection counts for monomial orbits, recurrence zero sets and unit equations.
#[derive(Parser)]
#[command(name = "orbitlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steps n <= n_max with G(Phi^n(w)) = 0
    OrbitIntersect(Common),
    /// Steps where two orbits coincide
    SyncOrbits(Common),
    /// Zero set of a rational linear recurrence
    LrsZeros(Common),
    /// Zero set of an exponential polynomial
    ExppolyZeros(Common),
    /// Solutions of F(n) = mu
    ValueSet(Common),
    /// Multiplicative independence with a relation certificate
    IndepCheck(Common),
    /// Unit equation solutions in an exponent box
    UnitSolve(Common),
    /// Evaluate one of the counting bounds
    BoundCalc(BoundArgs),
    /// Run an acceptance manifest (the shipped one by default)
    Reproduce(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file, or a bare payload for the chosen subcommand
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Number of primes for modular and hybrid scans
    #[arg(long)]
    primes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Include wall-clock time in the report
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Clone)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    /// Formula id, e.g. T3.1, used when no input file is given
    #[arg(long)]
    formula: Option<String>,
    /// Formula parameter as name=value, repeatable
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: orbitlab::Error| e.to_string())
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions { n_max: self.n_max, mode: self.mode, primes: self.primes, seed: self.seed, timings: self.timings }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A full problem file, or a payload wrapped into one.
fn load_problem(kind: ProblemKind, path: &Path) -> Result<ProblemFile> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let problem = if value.get("kind").is_some() && value.get("payload").is_some() {
        ProblemFile::from_json_str(&text)?
    } else {
        let p = ProblemFile::new(kind, value);
        p.validate()?;
        p
    };
    if problem.kind != kind {
        bail!("{} holds a {} problem, not {}", path.display(), problem.kind.as_str(), kind.as_str());
    }
    Ok(problem)
}

fn bound_problem(args: &BoundArgs) -> Result<ProblemFile> {
    if let Some(path) = &args.common.input {
        return load_problem(ProblemKind::BoundCalc, path);
    }
    let Some(formula) = &args.formula else {
        bail!("bound-calc needs --input or --formula");
    };
    let mut payload = serde_json::Map::new();
    payload.insert("formula".into(), formula.clone().into());
    for p in &args.params {
        let (name, value) = p.split_once('=').with_context(|| format!("parameter {p:?} is not NAME=VALUE"))?;
        let v = match value.parse::<u64>() {
            Ok(n) => serde_json::Value::from(n),
            Err(_) => serde_json::Value::from(value),
        };
        payload.insert(name.trim().to_string(), v);
    }
    let problem = ProblemFile::new(ProblemKind::BoundCalc, payload.into());
    problem.validate()?;
    Ok(problem)
}

fn emit(json: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let (kind, common) = match &cli.command {
        Command::OrbitIntersect(c) => (ProblemKind::OrbitIntersect, c),
        Command::SyncOrbits(c) => (ProblemKind::SyncOrbits, c),
        Command::LrsZeros(c) => (ProblemKind::LrsZeros, c),
        Command::ExppolyZeros(c) => (ProblemKind::ExppolyZeros, c),
        Command::ValueSet(c) => (ProblemKind::ValueSet, c),
        Command::IndepCheck(c) => (ProblemKind::IndepCheck, c),
        Command::UnitSolve(c) => (ProblemKind::UnitSolve, c),
        Command::BoundCalc(b) => {
            let problem = bound_problem(b)?;
            let report = run(&problem, &b.common.options())?;
            emit(&report.to_json(), &b.common.json_out)?;
            return Ok(report.exit_code());
        }
        Command::Reproduce(c) => {
            let manifest = match &c.input {
                Some(path) => Manifest::from_json_str(&read(path)?)?,
                None => Manifest::acceptance(),
            };
            let suite = reproduce_suite(&manifest, &c.options())?;
            for outcome in &suite.criteria {
                let mark = if outcome.passed { "PASS" } else { "FAIL" };
                eprintln!("{mark} {}", outcome.id);
                for f in &outcome.failures {
                    eprintln!("    {f}");
                }
            }
            emit(&serde_json::to_string_pretty(&suite)?, &c.json_out)?;
            return Ok(suite.exit_code());
        }
    };
    let Some(path) = &common.input else {
        bail!("{} needs --input <file>", kind.as_str());
    };
    let problem = load_problem(kind, path)?;
    let report = run(&problem, &common.options())?;
    emit(&report.to_json(), &common.json_out)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
