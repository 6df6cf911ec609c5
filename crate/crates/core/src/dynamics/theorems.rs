//! Hypothesis checks for the orbit/hypersurface counting theorems.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::map::{Hypersurface, MonomialMap};
use crate::bounds::{evaluate_bound, BoundParams, BoundSummary, BoundValue, FormulaId};
use crate::cyclo::field::{euler_phi, lcm_u64};
use crate::cyclo::{group_order_d, is_multiplicatively_independent, ratio_order, MonomialScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TheoremId {
    #[serde(rename = "3.1")]
    T31,
    #[serde(rename = "3.2")]
    T32,
    #[serde(rename = "3.3")]
    T33,
    #[serde(rename = "3.4")]
    T34,
    #[serde(rename = "3.5")]
    T35,
    #[serde(rename = "3.6")]
    T36,
    #[serde(rename = "3.7")]
    T37,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] =
        [TheoremId::T31, TheoremId::T32, TheoremId::T33, TheoremId::T34, TheoremId::T35, TheoremId::T36, TheoremId::T37];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T31 => "3.1",
            TheoremId::T32 => "3.2",
            TheoremId::T33 => "3.3",
            TheoremId::T34 => "3.4",
            TheoremId::T35 => "3.5",
            TheoremId::T36 => "3.6",
            TheoremId::T37 => "3.7",
        }
    }

    fn formula(self) -> FormulaId {
        match self {
            TheoremId::T31 => FormulaId::T31,
            TheoremId::T32 => FormulaId::T32,
            TheoremId::T33 => FormulaId::T33,
            TheoremId::T34 => FormulaId::T34,
            TheoremId::T35 => FormulaId::T35,
            TheoremId::T36 => FormulaId::T36,
            TheoremId::T37 => FormulaId::T37,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub applicable: bool,
    pub conditions: Vec<Condition>,
    pub failed: Vec<&'static str>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<&'static str, serde_json::Value>,
    pub bound: Option<BoundSummary>,
    #[serde(skip)]
    pub bound_value: Option<BoundValue>,
}

struct Checker {
    theorem: TheoremId,
    conditions: Vec<Condition>,
    details: BTreeMap<&'static str, serde_json::Value>,
}

impl Checker {
    fn new(theorem: TheoremId) -> Self {
        Checker { theorem, conditions: vec![], details: BTreeMap::new() }
    }

    fn check(&mut self, name: &'static str, holds: bool) -> bool {
        self.conditions.push(Condition { name, holds });
        holds
    }

    fn detail(&mut self, key: &'static str, v: impl Into<serde_json::Value>) {
        self.details.insert(key, v.into());
    }

    fn finish(self, params: BoundParams) -> HypothesisReport {
        let failed: Vec<&'static str> = self.conditions.iter().filter(|c| !c.holds).map(|c| c.name).collect();
        let applicable = failed.is_empty();
        let bound_value = applicable.then(|| evaluate_bound(self.theorem.formula(), &params).ok()).flatten();
        HypothesisReport {
            theorem: self.theorem,
            applicable: applicable && bound_value.is_some(),
            conditions: self.conditions,
            failed,
            details: self.details,
            bound: bound_value.as_ref().map(|b| b.summary()),
            bound_value,
        }
    }
}

/// Facts shared by all checks.
struct Context<'a> {
    map: &'a MonomialMap,
    g: &'a Hypersurface,
    w: &'a [MonomialScalar],
    m: usize,
    n_terms: u64,
    independent: bool,
}

fn two() -> BigUint {
    BigUint::from(2u32)
}

pub fn applicable_theorems(map: &MonomialMap, g: &Hypersurface, w: &[MonomialScalar]) -> Vec<HypothesisReport> {
    let independent = is_multiplicatively_independent(w).map(|r| r.independent).unwrap_or(false);
    let cx = Context { map, g, w, m: map.dim(), n_terms: g.n_terms() as u64, independent };
    vec![t31(&cx), t32(&cx), t33(&cx), t34(&cx), t35(&cx), t36(&cx), t37(&cx)]
}

fn nm(cx: &Context) -> BoundParams {
    BoundParams::default().with("n", cx.n_terms).with("m", cx.m as u64)
}

fn shape_ok(cx: &Context, c: &mut Checker) -> bool {
    let ok = cx.map.dim() == cx.g.dim() && cx.w.len() == cx.m;
    c.check("dimensions-agree", ok)
}

fn t31(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T31);
    shape_ok(cx, &mut c);
    let d = cx.map.power_degree();
    c.check("power-map", d.is_some());
    c.check("degree-at-least-2", d.as_ref().is_some_and(|d| d >= &two()));
    c.check("multiplicatively-independent", cx.independent);
    c.finish(BoundParams::default().with("n", cx.n_terms))
}

/// Pure-power shape `sum_j a_j X_j^e_j`: variable index of each term, `None` for the constant.
pub(crate) fn separated_shape(g: &Hypersurface, m: usize) -> Option<Vec<Option<(usize, BigUint)>>> {
    let mut used = vec![false; m];
    let mut constants = 0;
    let mut out = vec![];
    for t in g.terms() {
        if t.is_constant() {
            constants += 1;
            out.push(None);
            continue;
        }
        let (j, e) = t.pure_power()?;
        if used[j] {
            return None;
        }
        used[j] = true;
        out.push(Some((j, e)));
    }
    (constants <= 1 && g.n_terms() <= m).then_some(out)
}

fn t32(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T32);
    shape_ok(cx, &mut c);
    let d = cx.map.power_degree();
    c.check("power-map", d.is_some());
    c.check("degree-at-least-2", d.as_ref().is_some_and(|d| d >= &two()));
    let shape = separated_shape(cx.g, cx.m);
    c.check("separated-variables", shape.is_some());
    let big_d = group_order_d(cx.w);
    c.detail("D", big_d);
    let j0 = shape.as_ref().and_then(|s| {
        s.iter().flatten().map(|(j, _)| *j).find(|&j| {
            !cx.w[j].is_root_of_unity()
                && (0..cx.m).all(|i| i == j || ratio_order(&cx.w[i], &cx.w[j]).is_none())
        })
    });
    if let Some(j) = j0 {
        c.detail("j0", j + 1);
    }
    c.check("dominant-index-exists", j0.is_some());
    c.finish(BoundParams::default().with("n", cx.n_terms).with("D", big_d))
}

fn t33(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T33);
    shape_ok(cx, &mut c);
    let diag = cx.map.diagonal();
    c.check("diagonal-map", diag.is_some());
    c.check("all-degrees-at-least-2", diag.as_ref().is_some_and(|d| d.iter().all(|x| x >= &two())));
    c.check("multiplicatively-independent", cx.independent);
    c.finish(nm(cx))
}

/// Minimal conductor of all inputs and the degree of the field it generates.
fn field_degree(cx: &Context) -> u64 {
    let mut n = 1;
    for w in cx.w {
        n = lcm_u64(n, w.conductor());
    }
    for t in cx.g.terms() {
        n = lcm_u64(n, t.coeff.minimal_conductor());
    }
    euler_phi(n)
}

fn t34(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T34);
    let dims = shape_ok(cx, &mut c);
    let diag = cx.map.diagonal();
    c.check("diagonal-map", diag.is_some());
    c.check("some-degree-at-least-2", diag.as_ref().is_some_and(|d| d.iter().any(|x| x >= &two())));
    c.check("zero-constant-term", cx.g.constant_term().is_none());
    let terms = cx.g.terms();
    let distinct = (0..terms.len()).all(|i| {
        (i + 1..terms.len()).all(|j| terms[i].exps.iter().zip(&terms[j].exps).all(|(a, b)| a != b))
    });
    c.check("exponents-differ-in-every-coordinate", distinct);
    c.check("multiplicatively-independent", cx.independent);
    // alpha_i = (w_1^i_1, ..., w_m^i_m); alpha_i^z = alpha_j^z must force z = 0
    let trivial = dims
        && distinct
        && (0..terms.len()).all(|i| {
            (i + 1..terms.len()).all(|j| {
                let ratios: Vec<MonomialScalar> = (0..cx.m)
                    .map(|l| {
                        let e = BigInt::from(terms[i].exps[l].clone()) - BigInt::from(terms[j].exps[l].clone());
                        cx.w[l].pow(&e)
                    })
                    .collect();
                is_multiplicatively_independent(&ratios).map(|r| r.independent).unwrap_or(false)
            })
        });
    c.check("exponent-tuples-have-trivial-relations", trivial);
    let d = field_degree(cx);
    c.detail("d", d);
    c.finish(nm(cx).with("d", d))
}

fn t35(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T35);
    let dims = shape_ok(cx, &mut c);
    let m = cx.m;
    let s = cx.map.exponents();
    let d = &s[0][0];
    let first = (1..m).all(|j| s[0][j].is_zero()) && d >= &two();
    c.check("first-coordinate-power-at-least-2", first);
    c.check("diagonal-exponents-positive", (1..m).all(|i| !s[i][i].is_zero()));
    c.check("other-degrees-below-d", (1..m).all(|i| &cx.map.row_degree(i) < d));
    let deg = cx.g.degree();
    let lead = dims
        && cx.g.terms().iter().any(|t| {
            t.pure_power().is_some_and(|(j, e)| j == 0 && e == deg) && !deg.is_zero()
        });
    c.check("has-X1-power-of-full-degree", lead);
    c.check("multiplicatively-independent", cx.independent);
    c.finish(nm(cx))
}

fn t36(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T36);
    let dims = shape_ok(cx, &mut c);
    let m = cx.m;
    let s = cx.map.exponents();
    c.check("dimension-at-least-2", m >= 2);
    let upper = (0..m).all(|i| (0..i).all(|j| s[i][j].is_zero()));
    c.check("upper-triangular", upper);
    let last = (0..m).all(|j| if j == m - 1 { s[m - 1][j].is_one() } else { s[m - 1][j].is_zero() });
    c.check("last-coordinate-fixed", last);
    let growth = (0..m.saturating_sub(1)).all(|i| {
        s[i][i] > BigUint::one() || (!s[i][i].is_zero() && (i + 1..m).any(|j| !s[i][j].is_zero()))
    });
    c.check("rows-grow", growth);
    let pure_last = if dims {
        cx.g.terms().iter().filter(|t| t.pure_power().is_some_and(|(j, _)| j == m - 1)).count()
    } else {
        0
    };
    c.check("single-pure-power-of-last-variable", pure_last == 1);
    let earlier = dims && cx.g.terms().iter().any(|t| t.exps[..m - 1].iter().any(|e| !e.is_zero()));
    c.check("term-divisible-by-earlier-variable", earlier);
    c.check("zero-constant-term", cx.g.constant_term().is_none());
    c.check("multiplicatively-independent", cx.independent);
    c.finish(nm(cx))
}

fn t37(cx: &Context) -> HypothesisReport {
    let mut c = Checker::new(TheoremId::T37);
    shape_ok(cx, &mut c);
    c.check("all-degrees-at-least-2", (0..cx.m).all(|i| cx.map.row_degree(i) >= two()));
    c.check("nonzero-constant-term", cx.g.constant_term().is_some());
    c.check("multiplicatively-independent", cx.independent);
    c.finish(nm(cx))
}

/// Bounds of the applicable theorems.
pub fn applicable_bounds(reports: &[HypothesisReport]) -> Vec<(TheoremId, BoundValue)> {
    reports
        .iter()
        .filter_map(|r| r.bound_value.clone().map(|b| (r.theorem, b)))
        .collect()
}
