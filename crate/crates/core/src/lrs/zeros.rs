//! Zero sets and value sets over a finite scan window, with certified progressions.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::degeneracy::{degeneracy_order, residue_decompose};
use super::exppoly::{cyclotomic_field_is_cyclic, ExpTerm, ExponentialPolynomial};
use super::recurrence::LinearRecurrence;
use crate::bounds::{BoundCheck, BoundParams, FormulaId};
use crate::cyclo::{group_order_d, ratio_order, CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};

/// `{offset + t * difference : t >= 0}`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub offset: u64,
    pub difference: u64,
}

impl Progression {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.offset && (n - self.offset).is_multiple_of(self.difference)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSetReport {
    /// zeros in the window outside every certified progression
    pub isolated: Vec<u64>,
    pub progressions: Vec<Progression>,
    pub n_max: u64,
    pub degeneracy_order: u64,
    /// order of the (minimal) recurrence
    pub order: usize,
    pub simple: bool,
    pub nondegenerate: bool,
    pub bounds: Vec<BoundCheck>,
}

impl ZeroSetReport {
    /// All zeros in `0..=n_max`.
    pub fn zeros_in_window(&self) -> Vec<u64> {
        let mut all: BTreeSet<u64> = self.isolated.iter().copied().collect();
        for p in &self.progressions {
            all.extend((p.offset..=self.n_max).step_by(p.difference as usize));
        }
        all.into_iter().collect()
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds)
    }
}

fn u(x: usize) -> u64 {
    x as u64
}

/// Split raw window zeros into certified progressions and isolated points.
fn assemble(zeros: Vec<u64>, certified: Vec<u64>, d: u64, n_max: u64) -> Result<(Vec<u64>, Vec<Progression>)> {
    let progressions: Vec<Progression> =
        certified.into_iter().map(|b| Progression { offset: b, difference: d }).collect();
    let zero_set: BTreeSet<u64> = zeros.iter().copied().collect();
    for p in &progressions {
        if let Some(n) = (p.offset..=n_max).step_by(d as usize).find(|n| !zero_set.contains(n)) {
            return Err(Error::Internal(format!("certified progression misses the scanned zero {n}")));
        }
    }
    let isolated = zeros.into_iter().filter(|&n| !progressions.iter().any(|p| p.contains(n))).collect();
    Ok((isolated, progressions))
}

fn component_checks(checks: &mut Vec<BoundCheck>, m: usize, simple: bool, components: u64) -> Result<()> {
    let pm = BoundParams::default().with("m", u(m));
    checks.push(BoundCheck::new("progressions", components, FormulaId::L21General, &pm)?);
    if simple {
        checks.push(BoundCheck::new("progressions", components, FormulaId::L21Simple, &pm)?);
    }
    Ok(())
}

/// Zero set of a rational recurrence over `0..=n_max`.
pub fn zero_set(l: &LinearRecurrence, n_max: u64) -> Result<ZeroSetReport> {
    let count = usize::try_from(n_max).map_err(|_| Error::Resource("scan bound too large".into()))? + 1;
    let terms = l.terms(count);
    let zeros: Vec<u64> = (0..).zip(&terms).filter(|(_, v)| v.is_zero()).map(|(n, _)| n).collect();
    let min = l.minimal();
    let f = min.characteristic();
    let d = degeneracy_order(&f)?;
    let classes = residue_decompose(&min, d)?;
    let certified = classes.iter().filter(|c| c.identically_zero).map(|c| c.residue).collect();
    let (isolated, progressions) = assemble(zeros, certified, d, n_max)?;
    let m = min.order();
    let simple = f.is_squarefree();
    let nondegenerate = d == 1;
    let k = f.squarefree_part().degree().unwrap_or(0);
    let a = f.max_multiplicity();
    let mut bounds = vec![];
    component_checks(&mut bounds, m, simple, u(isolated.len() + progressions.len()))?;
    if nondegenerate {
        let p = BoundParams::default().with("k", u(k)).with("a", u(a));
        bounds.push(BoundCheck::new("zeros", u(isolated.len()), FormulaId::L22Poly, &p)?);
    }
    if m >= 2 {
        let p = BoundParams::default().with("d", 1).with("m", u(m));
        bounds.push(BoundCheck::new("D", d, FormulaId::Dubickas, &p)?);
    }
    Ok(ZeroSetReport { isolated, progressions, n_max, degeneracy_order: d, order: m, simple, nondegenerate, bounds })
}

/// Residues `b < D` with `F(b + tD) = 0` for `t < m`, which forces the whole class to vanish.
fn certified_residues(f: &ExponentialPolynomial, d: u64) -> Vec<u64> {
    let m = u(f.order());
    let residues: Vec<u64> = (0..d).collect();
    let hits = crate::par::map(&residues, |&b| (0..m).all(|t| f.eval(b + t * d).is_zero()));
    residues.into_iter().zip(hits).filter(|(_, h)| *h).map(|(b, _)| b).collect()
}

/// Index whose ratio to every other base is not a root of unity.
fn has_free_base(alphas: &[MonomialScalar]) -> bool {
    (0..alphas.len()).any(|i| (0..alphas.len()).all(|j| j == i || ratio_order(&alphas[i], &alphas[j]).is_none()))
}

struct Scan {
    isolated: Vec<u64>,
    progressions: Vec<Progression>,
    d: u64,
}

fn scan(f: &ExponentialPolynomial, n_max: u64) -> Result<Scan> {
    let ns: Vec<u64> = (0..=n_max).collect();
    let vals = crate::par::map(&ns, |&n| f.eval(n).is_zero());
    let zeros = ns.into_iter().zip(vals).filter(|(_, z)| *z).map(|(n, _)| n).collect();
    let d = group_order_d(&f.alphas());
    let (isolated, progressions) = assemble(zeros, certified_residues(f, d), d, n_max)?;
    Ok(Scan { isolated, progressions, d })
}

/// Zero set of `F` over `0..=n_max`. `omega`, when given, is the number of prime ideals
/// dividing the bases and enables the p-adic bound.
pub fn exppoly_zero_scan(f: &ExponentialPolynomial, n_max: u64, omega: Option<u64>) -> Result<ZeroSetReport> {
    let s = scan(f, n_max)?;
    let (k, a, m) = (u(f.n_terms()), u(f.poly_bound()), f.order());
    let simple = f.is_simple();
    let nondegenerate = s.d == 1;
    let zeros = u(s.isolated.len());
    let mut bounds = vec![];
    component_checks(&mut bounds, m, simple, u(s.isolated.len() + s.progressions.len()))?;
    if nondegenerate {
        let p = BoundParams::default().with("k", k).with("a", a);
        bounds.push(BoundCheck::new("zeros", zeros, FormulaId::L22Poly, &p)?);
    }
    let free = has_free_base(&f.alphas());
    if free {
        let p = BoundParams::default().with("D", s.d).with("k", k).with("a", a);
        bounds.push(BoundCheck::new("zeros", zeros, FormulaId::L23, &p)?);
    }
    let field_degree = f.field_degree();
    if let (true, Some(w), true) = (free, omega, m >= 2) {
        let p = BoundParams::default().with("D", s.d).with("d", field_degree).with("omega", w).with("m", u(m));
        bounds.push(BoundCheck::new("zeros", zeros, FormulaId::L25, &p)?);
        if field_degree > 1 && !cyclotomic_field_is_cyclic(f.field_conductor()) {
            bounds.push(BoundCheck::new("zeros", zeros, FormulaId::L25, &p.variant("galois"))?);
        }
    }
    if m >= 2 {
        let p = BoundParams::default().with("d", field_degree).with("m", u(m));
        bounds.push(BoundCheck::new("D", s.d, FormulaId::Dubickas, &p)?);
    }
    Ok(ZeroSetReport {
        isolated: s.isolated,
        progressions: s.progressions,
        n_max,
        degeneracy_order: s.d,
        order: m,
        simple,
        nondegenerate,
        bounds,
    })
}

/// Solutions of `F(n) = mu` over `0..=n_max`, as zeros of `F - mu * 1^z`.
pub fn value_set(f: &ExponentialPolynomial, mu: &CyclotomicNumber, n_max: u64) -> Result<ZeroSetReport> {
    if mu.is_zero() {
        return Err(Error::domain("mu must be nonzero; use the zero-set scan for F(n) = 0"));
    }
    let one = MonomialScalar::one();
    let mut terms = f.terms().to_vec();
    match terms.iter_mut().find(|t| t.alpha.is_one()) {
        Some(t) => t.poly[0] = t.poly[0].sub(mu),
        None => terms.push(ExpTerm::new(vec![mu.neg()], one.clone())),
    }
    let terms: Vec<ExpTerm> = terms.into_iter().map(|t| ExpTerm::new(t.poly, t.alpha)).filter(|t| !t.poly.is_empty()).collect();
    let alphas = f.alphas();
    let (k, a, m) = (u(f.n_terms()), u(f.poly_bound()), f.order());
    let mut extended = alphas.clone();
    if !extended.contains(&one) {
        extended.push(one);
    }
    let mut bounds = vec![];
    if has_free_base(&extended) {
        let d = group_order_d(&extended);
        let p = BoundParams::default().with("D", d).with("k", k).with("a", a);
        bounds.push((FormulaId::C24, p));
    }
    let f_nondegenerate = group_order_d(&alphas) == 1;
    if f_nondegenerate && f.is_simple() && alphas.iter().all(|x| !x.is_root_of_unity()) {
        bounds.push((FormulaId::C24, BoundParams::default().with("m", u(m)).variant("simple")));
    }
    if terms.is_empty() {
        // F is the constant mu
        let checks = bounds
            .into_iter()
            .map(|(id, p)| BoundCheck::new("solutions", u64::MAX, id, &p))
            .collect::<Result<_>>()?;
        return Ok(ZeroSetReport {
            isolated: vec![],
            progressions: vec![Progression { offset: 0, difference: 1 }],
            n_max,
            degeneracy_order: 1,
            order: 1,
            simple: true,
            nondegenerate: false,
            bounds: checks,
        });
    }
    let g = ExponentialPolynomial::new(terms)?;
    let s = scan(&g, n_max)?;
    let count = if s.progressions.is_empty() { u(s.isolated.len()) } else { u64::MAX };
    let checks = bounds
        .into_iter()
        .map(|(id, p)| BoundCheck::new("solutions", count, id, &p))
        .collect::<Result<_>>()?;
    Ok(ZeroSetReport {
        isolated: s.isolated,
        progressions: s.progressions,
        n_max,
        degeneracy_order: s.d,
        order: g.order(),
        simple: g.is_simple(),
        nondegenerate: s.d == 1,
        bounds: checks,
    })
}
