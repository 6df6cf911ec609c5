//! Scans of the intersection set `{n <= n_max : G(Phi^(n)(w)) = 0}`.

use serde::{Deserialize, Serialize};

use super::eval::{is_zero_at, ExactConfig, FactoredPoint};
use super::map::{mat_mul, Hypersurface, Matrix, MonomialMap};
use super::modular::{default_primes, modular_scan, ModularData, DEFAULT_PRIME_COUNT};
use super::theorems::{applicable_bounds, applicable_theorems, HypothesisReport, TheoremId};
use crate::bounds::{compare_count_u64, BoundSummary};
use crate::cyclo::MonomialScalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Modular,
    Hybrid,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "modular" => Ok(Mode::Modular),
            "hybrid" => Ok(Mode::Hybrid),
            _ => Err(Error::Config(format!("unknown mode {s:?}; expected exact, modular or hybrid"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Exact,
    ModularOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Member {
    pub n: u64,
    pub verification: Verification,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBound {
    pub theorem: TheoremId,
    pub bound: BoundSummary,
    /// `|members| < bound`, decided with outward rounding
    pub count_below_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub members: Vec<Member>,
    pub n_max: u64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    pub bounds: Vec<TheoremBound>,
    #[serde(skip)]
    pub hypotheses: Vec<HypothesisReport>,
}

impl IntersectionReport {
    pub fn member_steps(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.n).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub mode: Mode,
    pub n_max: u64,
    pub prime_count: usize,
    pub seed: u64,
    pub exact: ExactConfig,
}

impl ScanConfig {
    pub fn new(mode: Mode, n_max: u64) -> Self {
        ScanConfig { mode, n_max, prime_count: DEFAULT_PRIME_COUNT, seed: 0, exact: ExactConfig::default() }
    }
}

fn check_dims(map: &MonomialMap, g: &Hypersurface, w: &[MonomialScalar]) -> Result<()> {
    if g.dim() != map.dim() || w.len() != map.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: map {}, hypersurface {}, point {}",
            map.dim(),
            g.dim(),
            w.len()
        )));
    }
    Ok(())
}

/// Exponent matrices `S^0 ..= S^n_max`.
fn powers(map: &MonomialMap, n_max: u64) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(map.compose_power(0));
    for n in 1..=n_max {
        let next = mat_mul(&out[n as usize - 1], map.exponents());
        out.push(next);
    }
    out
}

/// Members without theorem bookkeeping.
pub fn scan_members(
    map: &MonomialMap,
    g: &Hypersurface,
    w: &[MonomialScalar],
    cfg: &ScanConfig,
) -> Result<(Vec<Member>, Vec<u64>)> {
    check_dims(map, g, w)?;
    match cfg.mode {
        Mode::Exact => {
            let fp = FactoredPoint::new(w, &cfg.exact)?;
            let mats = powers(map, cfg.n_max);
            let flags = crate::par::map(&mats, |s| is_zero_at(g, &fp, s, &cfg.exact));
            let mut members = vec![];
            for (n, f) in flags.into_iter().enumerate() {
                if f? {
                    members.push(Member { n: n as u64, verification: Verification::Exact });
                }
            }
            Ok((members, vec![]))
        }
        Mode::Modular | Mode::Hybrid => {
            if cfg.mode == Mode::Hybrid && cfg.prime_count < 3 {
                return Err(Error::Config("hybrid mode needs at least 3 primes".into()));
            }
            if cfg.prime_count == 0 {
                return Err(Error::Config("modular mode needs at least one prime".into()));
            }
            let data = ModularData::new(g, w);
            let primes = default_primes(&data, cfg.prime_count, cfg.seed);
            let candidates = modular_scan(g, map, w, cfg.n_max, &primes)?;
            let prime_list = primes.iter().map(|p| p.p).collect();
            if cfg.mode == Mode::Modular {
                let members =
                    candidates.into_iter().map(|n| Member { n, verification: Verification::ModularOnly }).collect();
                return Ok((members, prime_list));
            }
            let fp = FactoredPoint::new(w, &cfg.exact)?;
            let confirmed = crate::par::map(&candidates, |&n| confirm(map, g, &fp, n, &cfg.exact));
            let mut members = vec![];
            for (n, c) in candidates.into_iter().zip(confirmed) {
                match c? {
                    Some(true) => members.push(Member { n, verification: Verification::Exact }),
                    Some(false) => {}
                    None => members.push(Member { n, verification: Verification::ModularOnly }),
                }
            }
            Ok((members, prime_list))
        }
    }
}

/// Exact confirmation of a modular zero; `None` when beyond the exact cutoff.
fn confirm(map: &MonomialMap, g: &Hypersurface, fp: &FactoredPoint, n: u64, cfg: &ExactConfig) -> Result<Option<bool>> {
    let growth = map
        .exponents()
        .iter()
        .flatten()
        .max()
        .map_or(0, |x| x.bits())
        + (map.dim() as u64).next_power_of_two().trailing_zeros() as u64;
    if growth.saturating_mul(n) > cfg.cutoff_bits {
        return Ok(None);
    }
    match is_zero_at(g, fp, &map.compose_power(n), cfg) {
        Ok(z) => Ok(Some(z)),
        Err(Error::Resource(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn intersection_set(
    map: &MonomialMap,
    g: &Hypersurface,
    w: &[MonomialScalar],
    cfg: &ScanConfig,
) -> Result<IntersectionReport> {
    let (members, primes) = scan_members(map, g, w, cfg)?;
    let hypotheses = applicable_theorems(map, g, w);
    let bounds = applicable_bounds(&hypotheses)
        .into_iter()
        .map(|(theorem, b)| TheoremBound {
            theorem,
            count_below_bound: compare_count_u64(members.len() as u64, &b),
            bound: b.summary(),
        })
        .collect();
    Ok(IntersectionReport { members, n_max: cfg.n_max, mode: cfg.mode, primes, bounds, hypotheses })
}
