//! Problem files, run reports and the reproduction harness.

use std::time::Instant;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{evaluate_bound, BoundCheck, BoundParams, FormulaId};
use crate::cyclo::relations::apply_relation;
use crate::cyclo::{is_multiplicatively_independent, CyclotomicNumber, MonomialScalar};
use crate::dynamics::{
    dominant_term_threshold, intersection_set, synchronized_intersection, Hypersurface, IntersectionReport, Mode,
    MonomialMap, ScanConfig,
};
use crate::error::{Error, Result};
use crate::lrs::{exppoly_zero_scan, interleave, residue_decompose, value_set, zero_set, ExponentialPolynomial, LinearRecurrence};
use crate::units::{solve_units, UnitInstance};

pub const DEFAULT_N_MAX: u64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    OrbitIntersect,
    SyncOrbits,
    LrsZeros,
    ExppolyZeros,
    ValueSet,
    IndepCheck,
    UnitSolve,
    BoundCalc,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 8] = [
        ProblemKind::OrbitIntersect,
        ProblemKind::SyncOrbits,
        ProblemKind::LrsZeros,
        ProblemKind::ExppolyZeros,
        ProblemKind::ValueSet,
        ProblemKind::IndepCheck,
        ProblemKind::UnitSolve,
        ProblemKind::BoundCalc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::OrbitIntersect => "orbit-intersect",
            ProblemKind::SyncOrbits => "sync-orbits",
            ProblemKind::LrsZeros => "lrs-zeros",
            ProblemKind::ExppolyZeros => "exppoly-zeros",
            ProblemKind::ValueSet => "value-set",
            ProblemKind::IndepCheck => "indep-check",
            ProblemKind::UnitSolve => "unit-solve",
            ProblemKind::BoundCalc => "bound-calc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: ProblemKind,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn schema_error<E: std::fmt::Display>(prefix: &str, e: serde_path_to_error::Error<E>) -> Error {
    let inner = e.path().to_string();
    let path = match (prefix.is_empty(), inner == ".") {
        (true, _) => inner,
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{inner}"),
    };
    Error::Schema { path, message: e.inner().to_string() }
}

fn parse_value<T: DeserializeOwned>(prefix: &str, v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| schema_error(prefix, e))
}

impl ProblemFile {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let p: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| schema_error("", e))?;
        p.validate()?;
        Ok(p)
    }

    pub fn new(kind: ProblemKind, payload: Value) -> Self {
        ProblemFile { kind, payload, n_max: None, mode: None, primes: None, seed: None }
    }

    /// Check the payload against the schema of its kind.
    pub fn validate(&self) -> Result<()> {
        Payload::parse(self).map(|_| ())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitPayload {
    map: MonomialMap,
    point: Vec<MonomialScalar>,
    hypersurface: Hypersurface,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SyncPayload {
    f: MonomialMap,
    h: MonomialMap,
    w1: Vec<MonomialScalar>,
    w2: Vec<MonomialScalar>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExppolyPayload {
    terms: ExponentialPolynomial,
    #[serde(default)]
    omega: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueSetPayload {
    terms: ExponentialPolynomial,
    mu: CyclotomicNumber,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndepPayload {
    values: Vec<MonomialScalar>,
}

enum Payload {
    Orbit(OrbitPayload),
    Sync(SyncPayload),
    Lrs(LinearRecurrence),
    Exppoly(ExppolyPayload),
    ValueSet(ValueSetPayload),
    Indep(IndepPayload),
    Unit(UnitInstance),
    Bound(FormulaId, BoundParams),
}

impl Payload {
    fn parse(p: &ProblemFile) -> Result<Self> {
        let v = p.payload.clone();
        let pre = "payload";
        Ok(match p.kind {
            ProblemKind::OrbitIntersect => Payload::Orbit(parse_value(pre, v)?),
            ProblemKind::SyncOrbits => Payload::Sync(parse_value(pre, v)?),
            ProblemKind::LrsZeros => Payload::Lrs(parse_value(pre, v)?),
            ProblemKind::ExppolyZeros => Payload::Exppoly(parse_value(pre, v)?),
            ProblemKind::ValueSet => Payload::ValueSet(parse_value(pre, v)?),
            ProblemKind::IndepCheck => Payload::Indep(parse_value(pre, v)?),
            ProblemKind::UnitSolve => Payload::Unit(parse_value(pre, v)?),
            ProblemKind::BoundCalc => {
                let Value::Object(mut m) = v else {
                    return Err(Error::Schema { path: pre.into(), message: "expected an object".into() });
                };
                let f = m
                    .remove("formula")
                    .ok_or_else(|| Error::Schema { path: pre.into(), message: "missing field `formula`".into() })?;
                let formula: FormulaId = parse_value("payload.formula", f)?;
                Payload::Bound(formula, parse_value(pre, Value::Object(m))?)
            }
        })
    }
}

/// Command-line overrides; unset fields fall back to the problem file, then to defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub n_max: Option<u64>,
    pub mode: Option<Mode>,
    pub primes: Option<usize>,
    pub seed: Option<u64>,
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub n_max: u64,
    pub mode: Mode,
    pub primes: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// no theorem or lemma hypotheses hold, so no bound applies
    HypothesesNotMet,
    /// a computed count reached a bound; indicates an error somewhere
    BoundViolated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: ProblemFile,
    pub settings: Settings,
    pub status: Status,
    pub result: Value,
    pub ledger: Vec<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::HypothesesNotMet => 2,
            Status::BoundViolated => 1,
        }
    }

    pub fn ledger_holds(&self) -> bool {
        self.ledger.iter().all(|b| b.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn members_ledger(r: &IntersectionReport, quantity: &str) -> Vec<BoundCheck> {
    r.bounds
        .iter()
        .map(|b| BoundCheck {
            quantity: quantity.to_string(),
            count: r.members.len() as u64,
            bound: b.bound.clone(),
            holds: b.count_below_bound,
        })
        .collect()
}

pub fn run(problem: &ProblemFile, opts: &RunOptions) -> Result<RunReport> {
    let start = opts.timings.then(Instant::now);
    let payload = Payload::parse(problem)?;
    let settings = Settings {
        n_max: opts.n_max.or(problem.n_max).unwrap_or(DEFAULT_N_MAX),
        mode: opts.mode.or(problem.mode).unwrap_or_default(),
        primes: opts.primes.or(problem.primes).unwrap_or(crate::dynamics::modular::DEFAULT_PRIME_COUNT),
        seed: opts.seed.or(problem.seed).unwrap_or(0),
    };
    let mut cfg = ScanConfig::new(settings.mode, settings.n_max);
    cfg.prime_count = settings.primes;
    cfg.seed = settings.seed;
    let mut hypotheses_met = true;
    let (result, ledger) = match payload {
        Payload::Orbit(p) => {
            let r = intersection_set(&p.map, &p.hypersurface, &p.point, &cfg)?;
            hypotheses_met = r.hypotheses.iter().any(|h| h.applicable);
            let threshold = dominant_term_threshold(&p.map, &p.hypersurface, &p.point).ok();
            let ledger = members_ledger(&r, "members");
            let v = serde_json::json!({
                "intersection": to_value(&r),
                "hypotheses": to_value(&r.hypotheses),
                "threshold": to_value(&threshold),
            });
            (v, ledger)
        }
        Payload::Sync(p) => {
            let r = synchronized_intersection(&p.f, &p.h, &p.w1, &p.w2, &cfg)?;
            let ledger = members_ledger(&r.superset, "superset-members");
            (to_value(&r), ledger)
        }
        Payload::Lrs(l) => {
            let z = zero_set(&l, settings.n_max)?;
            let min = l.minimal();
            let classes = residue_decompose(&min, z.degeneracy_order)?;
            let count = settings.n_max as usize + 1;
            let interleave_verified = interleave(&classes, count) == l.terms(count);
            let ledger = z.bounds.clone();
            let v = serde_json::json!({
                "zero_set": to_value(&z),
                "minimal_order": min.order(),
                "characteristic": min.characteristic().to_string(),
                "residue_classes": to_value(&classes),
                "interleave_verified": interleave_verified,
            });
            (v, ledger)
        }
        Payload::Exppoly(p) => {
            let z = exppoly_zero_scan(&p.terms, settings.n_max, p.omega)?;
            let ledger = z.bounds.clone();
            (to_value(&z), ledger)
        }
        Payload::ValueSet(p) => {
            let z = value_set(&p.terms, &p.mu, settings.n_max)?;
            hypotheses_met = !z.bounds.is_empty();
            let ledger = z.bounds.clone();
            (to_value(&z), ledger)
        }
        Payload::Indep(p) => {
            let r = is_multiplicatively_independent(&p.values)?;
            let verified = r.certificate.as_ref().map(|c| apply_relation(&p.values, c).is_one());
            let mut v = to_value(&r);
            v["certificate_verified"] = to_value(&verified);
            (v, vec![])
        }
        Payload::Unit(inst) => {
            let r = solve_units(&inst, None)?;
            let ledger = r.bounds.clone();
            (to_value(&r), ledger)
        }
        Payload::Bound(f, params) => (to_value(&evaluate_bound(f, &params)?), vec![]),
    };
    let status = if ledger.iter().any(|b| !b.holds) {
        Status::BoundViolated
    } else if !hypotheses_met {
        Status::HypothesesNotMet
    } else {
        Status::Ok
    };
    Ok(RunReport {
        tool: "orbitlab",
        version: env!("CARGO_PKG_VERSION"),
        input: problem.clone(),
        settings,
        status,
        result,
        ledger,
        elapsed_ms: start.map(|s| s.elapsed().as_secs_f64() * 1e3),
    })
}

/// A check on a run report, addressed by JSON pointer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub pointer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equals: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// array length
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
}

impl Expectation {
    fn check(&self, report: &Value) -> std::result::Result<(), String> {
        let got = report.pointer(&self.pointer).ok_or_else(|| format!("{}: missing", self.pointer))?;
        if let Some(want) = &self.equals {
            if got != want {
                return Err(format!("{}: expected {want}, got {got}", self.pointer));
            }
        }
        if let Some(want) = self.length {
            match got.as_array() {
                Some(a) if a.len() == want => {}
                _ => return Err(format!("{}: expected an array of length {want}, got {got}", self.pointer)),
            }
        }
        if let Some(want) = self.approx {
            let tol = self.tol.unwrap_or(1e-9);
            match got.as_f64() {
                Some(x) if (x - want).abs() <= tol => {}
                _ => return Err(format!("{}: expected {want} +- {tol}, got {got}", self.pointer)),
            }
        }
        Ok(())
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Criterion {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub problem: ProblemFile,
    #[serde(default)]
    pub expect: Vec<Expectation>,
    #[serde(default = "default_true")]
    pub ledger_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_code: Option<i32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub criteria: Vec<Criterion>,
}

impl Manifest {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let m: Manifest = serde_path_to_error::deserialize(de).map_err(|e| schema_error("", e))?;
        for (i, c) in m.criteria.iter().enumerate() {
            c.problem.validate().map_err(|e| e.context(format!("criteria[{i}] ({})", c.id)))?;
        }
        Ok(m)
    }

    /// The acceptance suite shipped with the library.
    pub fn acceptance() -> Self {
        Self::from_json_str(include_str!("../manifests/acceptance.json")).expect("shipped manifest is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub criteria: Vec<CriterionOutcome>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.passed)
    }
}

pub fn reproduce_suite(manifest: &Manifest, opts: &RunOptions) -> Result<SuiteReport> {
    let mut criteria = vec![];
    for c in &manifest.criteria {
        let report = run(&c.problem, opts).map_err(|e| e.context(format!("criterion {}", c.id)))?;
        let json = to_value(&report);
        let mut failures: Vec<String> = c.expect.iter().filter_map(|e| e.check(&json).err()).collect();
        if c.ledger_holds != report.ledger_holds() {
            failures.push(format!("ledger holds: expected {}, got {}", c.ledger_holds, report.ledger_holds()));
        }
        if let Some(code) = c.exit_code {
            if code != report.exit_code() {
                failures.push(format!("exit code: expected {code}, got {}", report.exit_code()));
            }
        }
        criteria.push(CriterionOutcome { id: c.id.clone(), passed: failures.is_empty(), failures });
    }
    let passed = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport { tool: "orbitlab", version: env!("CARGO_PKG_VERSION"), criteria, passed })
}
