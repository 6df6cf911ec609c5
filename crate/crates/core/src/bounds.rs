//! Explicit counting bounds, carried in log form with optional exact integers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_biguint, ln_rational};

/// Exact integers are materialized only up to this many bits.
pub const EXACT_BITS_CUTOFF: f64 = 8192.0;

const REL_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    #[serde(rename = "L2.1-general")]
    L21General,
    #[serde(rename = "L2.1-simple")]
    L21Simple,
    #[serde(rename = "L2.2-poly")]
    L22Poly,
    #[serde(rename = "L2.3")]
    L23,
    #[serde(rename = "Eq2.3-dubickas")]
    Dubickas,
    #[serde(rename = "C2.4")]
    C24,
    #[serde(rename = "L2.5")]
    L25,
    #[serde(rename = "L2.6")]
    L26,
    #[serde(rename = "C2.7")]
    C27,
    #[serde(rename = "bell")]
    Bell,
    #[serde(rename = "L2.8")]
    L28,
    #[serde(rename = "T3.1")]
    T31,
    #[serde(rename = "T3.2")]
    T32,
    #[serde(rename = "T3.3")]
    T33,
    #[serde(rename = "T3.4")]
    T34,
    #[serde(rename = "T3.5")]
    T35,
    #[serde(rename = "T3.6")]
    T36,
    #[serde(rename = "T3.7")]
    T37,
}

impl FormulaId {
    pub const ALL: [FormulaId; 18] = [
        FormulaId::L21General,
        FormulaId::L21Simple,
        FormulaId::L22Poly,
        FormulaId::L23,
        FormulaId::Dubickas,
        FormulaId::C24,
        FormulaId::L25,
        FormulaId::L26,
        FormulaId::C27,
        FormulaId::Bell,
        FormulaId::L28,
        FormulaId::T31,
        FormulaId::T32,
        FormulaId::T33,
        FormulaId::T34,
        FormulaId::T35,
        FormulaId::T36,
        FormulaId::T37,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::L21General => "L2.1-general",
            FormulaId::L21Simple => "L2.1-simple",
            FormulaId::L22Poly => "L2.2-poly",
            FormulaId::L23 => "L2.3",
            FormulaId::Dubickas => "Eq2.3-dubickas",
            FormulaId::C24 => "C2.4",
            FormulaId::L25 => "L2.5",
            FormulaId::L26 => "L2.6",
            FormulaId::C27 => "C2.7",
            FormulaId::Bell => "bell",
            FormulaId::L28 => "L2.8",
            FormulaId::T31 => "T3.1",
            FormulaId::T32 => "T3.2",
            FormulaId::T33 => "T3.3",
            FormulaId::T34 => "T3.4",
            FormulaId::T35 => "T3.5",
            FormulaId::T36 => "T3.6",
            FormulaId::T37 => "T3.7",
        }
    }

    /// Parameter names the formula reads (besides `variant`).
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            FormulaId::L21General | FormulaId::L21Simple => &["m"],
            FormulaId::L22Poly => &["k", "a"],
            FormulaId::L23 => &["D", "k", "a"],
            FormulaId::Dubickas => &["d", "m"],
            FormulaId::C24 => &["D", "k", "a", "m"],
            FormulaId::L25 => &["D", "d", "omega", "m"],
            FormulaId::L26 | FormulaId::C27 => &["k", "r"],
            FormulaId::Bell => &["k"],
            FormulaId::L28 => &["k", "m", "d"],
            FormulaId::T31 => &["n"],
            FormulaId::T32 => &["n", "D"],
            FormulaId::T33 | FormulaId::T35 | FormulaId::T36 | FormulaId::T37 => &["n", "m"],
            FormulaId::T34 => &["n", "m", "d"],
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown formula id {s:?}")))
    }
}

/// Formula inputs. `n` is the number of monomials of the hypersurface polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub big_d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// `general` (default) or `simple` for C2.4; `general` or `galois` for L2.5
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

impl BoundParams {
    pub fn with(mut self, name: &str, v: u64) -> Self {
        match name {
            "m" => self.m = Some(v),
            "k" => self.k = Some(v),
            "a" => self.a = Some(v),
            "D" => self.big_d = Some(v),
            "d" => self.d = Some(v),
            "omega" => self.omega = Some(v),
            "r" => self.r = Some(v),
            "n" => self.n = Some(v),
            _ => panic!("unknown bound parameter {name}"),
        }
        self
    }

    pub fn variant(mut self, v: &str) -> Self {
        self.variant = Some(v.to_string());
        self
    }

    fn get(&self, name: &str) -> Option<u64> {
        match name {
            "m" => self.m,
            "k" => self.k,
            "a" => self.a,
            "D" => self.big_d,
            "d" => self.d,
            "omega" => self.omega,
            "r" => self.r,
            "n" => self.n,
            _ => None,
        }
    }

    fn need(&self, name: &str, min: u64) -> Result<u64> {
        match self.get(name) {
            None => Err(Error::domain(format!("missing parameter {name}"))),
            Some(v) if v < min => {
                Err(Error::domain(format!("parameter {name} must be at least {min}, got {v}")))
            }
            Some(v) => Ok(v),
        }
    }

    /// Copy holding only the named parameters.
    fn restrict(&self, names: &[&str]) -> Self {
        let mut out = BoundParams { variant: self.variant.clone(), ..Default::default() };
        for n in names {
            if let Some(v) = self.get(n) {
                out = out.with(n, v);
            }
        }
        out
    }
}

/// A bound carried as its natural log, rounded outward.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub formula: FormulaId,
    pub params: BoundParams,
    /// upper-rounded natural log; `+inf` when it overflows f64
    pub ln_upper: f64,
    /// lower-rounded natural log
    pub ln_lower: f64,
    /// lower-rounded log of the log, finite for every bound above e
    pub ln_ln_lower: f64,
    pub exact: Option<BigUint>,
}

impl BoundValue {
    pub fn log10(&self) -> f64 {
        0.5 * (self.ln_upper + self.ln_lower) / std::f64::consts::LN_10
    }

    pub fn ln(&self) -> f64 {
        0.5 * (self.ln_upper + self.ln_lower)
    }

    pub fn summary(&self) -> BoundSummary {
        BoundSummary {
            formula: self.formula,
            params: self.params.clone(),
            log10: finite(self.log10()),
            ln_ln: self.ln_ln_lower,
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Serialize for BoundValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BoundValue", 6)?;
        st.serialize_field("formula", &self.formula)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("log10", &finite(self.log10()))?;
        st.serialize_field("ln", &finite(self.ln()))?;
        st.serialize_field("ln_ln", &self.ln_ln_lower)?;
        st.serialize_field("exact", &self.exact.as_ref().map(|e| e.to_string()))?;
        st.end()
    }
}

/// Compact form embedded in run reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSummary {
    pub formula: FormulaId,
    pub params: BoundParams,
    pub log10: Option<f64>,
    pub ln_ln: f64,
}

/// Product of `base^exp` factors.
struct Product(Vec<(BigRational, BigUint)>);

impl Product {
    fn new() -> Self {
        Product(vec![])
    }

    fn times(mut self, base: BigRational, exp: BigUint) -> Self {
        self.0.push((base, exp));
        self
    }

    fn times_int(self, base: u64, exp: BigUint) -> Self {
        self.times(BigRational::from_integer(base.into()), exp)
    }

    fn ln(&self) -> f64 {
        self.0
            .iter()
            .filter(|(b, e)| !e.is_zero() && !b.is_one())
            .map(|(b, e)| ln_rational(b) * e.to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    fn exact(&self, ln: f64) -> Option<BigUint> {
        if !(ln / std::f64::consts::LN_2 <= EXACT_BITS_CUTOFF) {
            return None;
        }
        let mut acc = BigRational::one();
        for (b, e) in &self.0 {
            let e = e.to_u32()?;
            acc *= BigRational::new(b.numer().pow(e), b.denom().pow(e));
        }
        acc.is_integer().then(|| acc.to_integer().to_biguint()).flatten()
    }
}

fn ubig(x: u64) -> BigUint {
    BigUint::from(x)
}

fn upow(base: u64, e: u64) -> BigUint {
    num_traits::pow(ubig(base), e as usize)
}

fn half(k: u64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(2))
}

fn from_ln(formula: FormulaId, params: BoundParams, ln: f64, exact: Option<BigUint>) -> BoundValue {
    let slack = REL_MARGIN * ln.abs() + REL_MARGIN;
    let ln_upper = ln + slack;
    let ln_lower = ln - slack;
    let ln_ln_lower = if ln_lower > 0.0 { ln_lower.ln() - REL_MARGIN } else { f64::NEG_INFINITY };
    BoundValue { formula, params, ln_upper, ln_lower, ln_ln_lower, exact }
}

fn from_product(formula: FormulaId, params: BoundParams, p: Product) -> BoundValue {
    let ln = p.ln();
    let exact = p.exact(ln);
    // exact logs are sharper than the summed float estimate
    let ln = match &exact {
        Some(e) if !e.is_zero() => ln_biguint(e),
        _ => ln,
    };
    from_ln(formula, params, ln, exact)
}

/// `(8x)^(4 x^5)`
fn simple_ap(x: u64) -> Product {
    Product::new().times_int(8 * x, ubig(4) * upow(x, 5))
}

/// `(8 k^a)^(8 k^(6a))`
fn poly_count(k: u64, a: u64) -> Product {
    Product::new()
        .times(BigRational::from_integer(BigInt::from(8) * BigInt::from(upow(k, a))), ubig(8) * upow(k, 6 * a))
}

/// `(8k)^(4 (k-1)^4 (k+r))`
fn unit_count(k: u64, r: u64) -> Product {
    Product::new().times_int(8 * k, ubig(4) * upow(k - 1, 4) * ubig(k + r))
}

pub fn evaluate_bound(formula: FormulaId, params: &BoundParams) -> Result<BoundValue> {
    let names = formula.parameters();
    let p = params.restrict(names);
    let variant = params.variant.as_deref();
    let bad_variant = |v: &str| Err(Error::domain(format!("unknown variant {v:?} for {formula}")));
    match formula {
        FormulaId::L21General => {
            let m = p.need("m", 1)?;
            let ln_ln = 70.0 * m as f64;
            let ln = ln_ln.exp();
            let mut b = from_ln(formula, p, ln, None);
            b.ln_ln_lower = ln_ln * (1.0 - REL_MARGIN);
            if !ln.is_finite() {
                b.ln_upper = f64::INFINITY;
                b.ln_lower = f64::MAX;
            }
            Ok(b)
        }
        FormulaId::L21Simple => {
            let m = p.need("m", 1)?;
            Ok(from_product(formula, p, simple_ap(m)))
        }
        FormulaId::L22Poly => {
            let (k, a) = (p.need("k", 1)?, p.need("a", 1)?);
            Ok(from_product(formula, p, poly_count(k, a)))
        }
        FormulaId::L23 => {
            let (dd, k, a) = (p.need("D", 1)?, p.need("k", 1)?, p.need("a", 1)?);
            Ok(from_product(formula, p, poly_count(k, a).times_int(dd, ubig(1))))
        }
        FormulaId::Dubickas => {
            let (d, m) = (p.need("d", 1)?, p.need("m", 2)?);
            let (d, m) = (d as f64, m as f64);
            let ln = (1.05314 + (6.0 * d).sqrt()) * (m * (d * m).ln()).sqrt();
            Ok(from_ln(formula, p, ln, None))
        }
        FormulaId::C24 => match variant.unwrap_or("general") {
            "general" => {
                let (dd, k, a) = (p.need("D", 1)?, p.need("k", 1)?, p.need("a", 1)?);
                let p = p.restrict(&["D", "k", "a"]);
                Ok(from_product(formula, p, poly_count(k + 1, a).times_int(dd, ubig(1))))
            }
            "simple" => {
                let m = p.need("m", 1)?;
                let p = p.restrict(&["m"]);
                Ok(from_product(formula, p, simple_ap(m + 1)))
            }
            v => bad_variant(v),
        },
        FormulaId::L25 => {
            let (dd, d, w, m) = (p.need("D", 1)?, p.need("d", 1)?, p.need("omega", 0)?, p.need("m", 2)?);
            let e = match variant.unwrap_or("general") {
                "general" => 2 * (d + 1),
                "galois" => d + 2,
                v => return bad_variant(v),
            };
            let prod = Product::new()
                .times_int(dd, ubig(1))
                .times_int(4 * (d + w), ubig(e))
                .times_int(m - 1, ubig(1));
            Ok(from_product(formula, p, prod))
        }
        FormulaId::L26 => {
            let (k, r) = (p.need("k", 1)?, p.need("r", 0)?);
            Ok(from_product(formula, p, unit_count(k, r)))
        }
        FormulaId::C27 => {
            let (k, r) = (p.need("k", 1)?, p.need("r", 0)?);
            Ok(from_product(formula, p, unit_count(k, r).times(half(k), ubig(k))))
        }
        FormulaId::Bell => {
            let k = p.need("k", 1)? as f64;
            let ln = k * (0.792 * k / (k + 1.0).ln()).ln();
            Ok(from_ln(formula, p, ln, None))
        }
        FormulaId::L28 => {
            let (k, m, d) = (p.need("k", 1)?, p.need("m", 1)?, p.need("d", 1)?);
            Ok(from_product(formula, p, poly_exp_count(k, k.max(m), d)))
        }
        FormulaId::T31 => {
            let n = p.need("n", 1)?;
            Ok(from_product(formula, p, simple_ap(n)))
        }
        FormulaId::T32 => {
            let (n, dd) = (p.need("n", 1)?, p.need("D", 1)?);
            let prod = Product::new().times_int(dd, ubig(1)).times_int(8 * n, ubig(8) * upow(n, 6));
            Ok(from_product(formula, p, prod))
        }
        FormulaId::T33 | FormulaId::T35 | FormulaId::T36 | FormulaId::T37 => {
            let (n, m) = (p.need("n", 1)?, p.need("m", 1)?);
            let prod = Product::new()
                .times(half(n), ubig(n))
                .times_int(8 * n, ubig(4 * n) * upow(n - 1, 4) * ubig(m + 1));
            Ok(from_product(formula, p, prod))
        }
        FormulaId::T34 => {
            let (n, m, d) = (p.need("n", 1)?, p.need("m", 1)?, p.need("d", 1)?);
            Ok(from_product(formula, p, poly_exp_count(n, n.max(m), d)))
        }
    }
}

/// `(0.5k)^k 2^(35 B^3) d^(6 B^2)`
fn poly_exp_count(k: u64, b: u64, d: u64) -> Product {
    Product::new()
        .times(half(k), ubig(k))
        .times_int(2, ubig(35) * upow(b, 3))
        .times_int(d, ubig(6) * upow(b, 2))
}

/// True only when `count < bound` is certain.
pub fn compare_count(count: &BigUint, bound: &BoundValue) -> bool {
    if count.is_zero() {
        return true;
    }
    if let Some(e) = &bound.exact {
        return count < e;
    }
    let ln_count = ln_biguint(count);
    let ln_count_up = ln_count + REL_MARGIN * ln_count.abs() + 1e-15;
    if bound.ln_lower.is_finite() && bound.ln_lower < f64::MAX {
        return ln_count_up < bound.ln_lower;
    }
    // the bound's log overflowed; compare one level down
    if ln_count <= 1.0 {
        return bound.ln_ln_lower > 0.0;
    }
    ln_count_up.ln() + REL_MARGIN < bound.ln_ln_lower
}

pub fn compare_count_u64(count: u64, bound: &BoundValue) -> bool {
    compare_count(&BigUint::from(count), bound)
}

/// One ledger line: a computed count checked against a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub quantity: String,
    pub count: u64,
    pub bound: BoundSummary,
    /// `count < bound`, decided with outward rounding
    pub holds: bool,
}

impl BoundCheck {
    pub fn new(quantity: &str, count: u64, formula: FormulaId, params: &BoundParams) -> Result<Self> {
        let b = evaluate_bound(formula, params)?;
        Ok(BoundCheck { quantity: quantity.to_string(), count, holds: compare_count_u64(count, &b), bound: b.summary() })
    }
}

/// Bell numbers `B_0..=B_n` via the Bell triangle.
pub fn bell_numbers(n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![row.last().unwrap().clone()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(f: FormulaId, p: BoundParams) -> BoundValue {
        evaluate_bound(f, &p).unwrap()
    }

    #[test]
    fn simple_ap_spot_value() {
        let b = ev(FormulaId::L21Simple, BoundParams::default().with("m", 2));
        assert_eq!(b.exact, Some(BigUint::one() << 512u32));
        assert!((b.log10() - 154.13).abs() < 0.01);
    }

    #[test]
    fn dubickas_spot_value() {
        let b = ev(FormulaId::Dubickas, BoundParams::default().with("d", 1).with("m", 2));
        assert!((b.ln().exp() - 61.8).abs() < 0.5, "{}", b.ln().exp());
    }

    #[test]
    fn theorem_one_spot_value() {
        let b = ev(FormulaId::T31, BoundParams::default().with("n", 3));
        assert!((b.log10() - 1341.6).abs() < 0.1);
        assert_eq!(b.exact.as_ref().unwrap(), &num_traits::pow(BigUint::from(24u32), 972));
    }

    #[test]
    fn bell_tight_case() {
        let b = ev(FormulaId::Bell, BoundParams::default().with("k", 4));
        assert!((b.ln().exp() - 15.013).abs() < 0.01);
        assert!(compare_count_u64(15, &b));
        assert!(!compare_count_u64(16, &b));
    }

    #[test]
    fn nested_log_bound_compares() {
        let b = ev(FormulaId::L21General, BoundParams::default().with("m", 20));
        assert!(b.ln_upper.is_infinite());
        let huge = BigUint::one() << 1_000_000u32;
        assert!(compare_count(&huge, &b));
    }

    #[test]
    fn missing_parameter_is_named() {
        let err = evaluate_bound(FormulaId::L26, &BoundParams::default().with("k", 3)).unwrap_err();
        assert!(err.to_string().contains("r"));
    }

    #[test]
    fn unit_bound_spot_value() {
        let b = ev(FormulaId::L26, BoundParams::default().with("k", 3).with("r", 3));
        assert!((b.log10() - 530.0).abs() < 0.1);
    }

    #[test]
    fn bell_triangle() {
        let b: Vec<u64> = bell_numbers(6).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203]);
    }
}
