//! Exact evaluation of a hypersurface polynomial along an orbit.
//!
//! Orbit exponents grow like `d^n`, so values are kept factored: every term is a
//! cyclotomic coefficient times a monomial in the primes of the base point. Equal
//! monomials are merged first; the remaining sum is either certified nonzero by an
//! interval estimate or materialized after dividing out the common part.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use num_rational::BigRational;

use super::map::{vec_mat, Hypersurface, Matrix, OrbitPoint};
use crate::cyclo::factor::{factor_rational, DEFAULT_TRIAL_LIMIT};
use crate::cyclo::relations::FactoredScalars;
use crate::cyclo::{embed_numeric, CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};
use crate::numeric::{fixed_to_f64, ln_biguint_fixed};

pub const DEFAULT_EXACT_CUTOFF_BITS: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    /// largest value (or exponent) size, in bits, handled exactly
    pub cutoff_bits: u64,
    pub trial_limit: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { cutoff_bits: DEFAULT_EXACT_CUTOFF_BITS, trial_limit: DEFAULT_TRIAL_LIMIT }
    }
}

fn cutoff_error(bits: u64, cutoff: u64) -> Error {
    Error::Resource(format!(
        "exact evaluation needs about {bits} bits, above the cutoff of {cutoff}; use modular or hybrid mode"
    ))
}

/// Value of `G` at the orbit point, fully materialized.
pub fn evaluate_exact(g: &Hypersurface, p: &OrbitPoint, cfg: &ExactConfig) -> Result<CyclotomicNumber> {
    if g.dim() != p.base.len() {
        return Err(Error::domain("hypersurface and point dimensions differ"));
    }
    let sizes: Vec<u64> = p
        .base
        .iter()
        .map(|w| w.modulus().numer().bits() + w.modulus().denom().bits())
        .collect();
    let mut acc = CyclotomicNumber::zero();
    for t in g.terms() {
        let e = p.monomial_exponents(&t.exps);
        let bits: f64 = e.iter().zip(&sizes).map(|(x, s)| x.to_f64().unwrap_or(f64::INFINITY) * *s as f64).sum();
        if bits > cfg.cutoff_bits as f64 {
            return Err(cutoff_error(bits.min(u64::MAX as f64) as u64, cfg.cutoff_bits));
        }
        let mono = e.iter().zip(&p.base).fold(MonomialScalar::one(), |m, (x, w)| m.mul(&w.pow_u(x)));
        acc = acc.add(&t.coeff.mul(&mono.to_cyclotomic()));
    }
    Ok(acc)
}

/// Factored view of a base point, shared across all steps of a scan.
#[derive(Clone, Debug)]
pub struct FactoredPoint {
    f: FactoredScalars,
}

impl FactoredPoint {
    pub fn new(w: &[MonomialScalar], cfg: &ExactConfig) -> Result<Self> {
        Ok(FactoredPoint { f: FactoredScalars::new(w, cfg.trial_limit)? })
    }

    /// Prime exponents and zeta exponent of `prod w_j^E_j`.
    pub fn monomial(&self, e: &[BigUint]) -> (BTreeMap<BigUint, BigInt>, BigInt) {
        let mut primes = BTreeMap::new();
        for (p, prime) in self.f.primes.iter().enumerate() {
            let mut s = BigInt::zero();
            for (j, x) in e.iter().enumerate() {
                let v = &self.f.exps[j][p];
                if !v.is_zero() && !x.is_zero() {
                    s += v * BigInt::from(x.clone());
                }
            }
            if !s.is_zero() {
                primes.insert(prime.clone(), s);
            }
        }
        let mut turn = BigInt::zero();
        for (j, x) in e.iter().enumerate() {
            turn += BigInt::from(self.f.turns[j]) * BigInt::from(x.clone());
        }
        let n = BigInt::from(self.f.conductor);
        (primes, ((turn % &n) + &n) % &n)
    }

    pub fn conductor(&self) -> u64 {
        self.f.conductor
    }
}

type Mono = BTreeMap<BigUint, BigInt>;

fn merge(terms: Vec<(Mono, CyclotomicNumber)>) -> Vec<(Mono, CyclotomicNumber)> {
    let mut map: BTreeMap<Mono, CyclotomicNumber> = BTreeMap::new();
    for (m, c) in terms {
        match map.get_mut(&m) {
            Some(acc) => *acc = acc.add(&c),
            None => {
                map.insert(m, c);
            }
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Move the rational content of each coefficient into its monomial.
fn absorb_content(terms: &mut [(Mono, CyclotomicNumber)], trial_limit: u64) -> bool {
    let mut changed = false;
    for (mono, c) in terms.iter_mut() {
        let content = c.content();
        if content.is_one() || content.is_zero() {
            continue;
        }
        let Ok(f) = factor_rational(&content, trial_limit) else { continue };
        for (p, e) in f {
            let slot = mono.entry(p).or_insert_with(BigInt::zero);
            *slot += e;
        }
        mono.retain(|_, e| !e.is_zero());
        *c = c.scale(&content.recip());
        changed = true;
    }
    changed
}

/// Sum of `coeff * monomial` terms, reduced to canonical form.
fn reduce(mut terms: Vec<(Mono, CyclotomicNumber)>, trial_limit: u64) -> Vec<(Mono, CyclotomicNumber)> {
    terms = merge(terms);
    loop {
        let before = terms.len();
        if !absorb_content(&mut terms, trial_limit) {
            return terms;
        }
        terms = merge(terms);
        if terms.len() == before {
            return terms;
        }
    }
}

/// Fixed-point precision grows with the exponents so that `e * ln p` stays accurate.
const BASE_FIX: u32 = 60;
const MAX_FIX: u32 = 1 << 17;

/// Decide whether `sum coeff_j * M_j` is certainly nonzero from a floating estimate.
fn certify_nonzero(terms: &[(Mono, CyclotomicNumber)]) -> Option<bool> {
    let ebits = terms.iter().flat_map(|(m, _)| m.values()).map(|e| e.bits()).max().unwrap_or(0);
    let fix = u32::try_from(ebits).ok()?.checked_add(BASE_FIX).filter(|&f| f <= MAX_FIX)?;
    let logs: BTreeMap<&BigUint, BigInt> =
        terms.iter().flat_map(|(m, _)| m.keys()).map(|p| (p, ln_biguint_fixed(p, fix))).collect();
    let ln_of = |m: &Mono| -> (BigInt, BigInt) {
        let mut v = BigInt::zero();
        let mut err = BigInt::zero();
        for (p, e) in m {
            v += e * &logs[p];
            err += e.abs() * 4;
        }
        (v, err + 1)
    };
    let lns: Vec<(BigInt, BigInt)> = terms.iter().map(|(m, _)| ln_of(m)).collect();
    let j0 = (0..terms.len()).max_by(|&a, &b| lns[a].0.cmp(&lns[b].0))?;
    let (mut re, mut im, mut err, mut mag) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (j, (_, c)) in terms.iter().enumerate() {
        let delta = &lns[j].0 - &lns[j0].0;
        let eps = &lns[j].1 + &lns[j0].1;
        let k = embed_numeric(c, 53).ok()?.approx();
        let kabs = k.re.hypot(k.im);
        let upper = fixed_to_f64(&(&delta + &eps), fix);
        if upper < -700.0 {
            err += (kabs + k.error) * (-700f64).exp();
            continue;
        }
        let (d, e) = (fixed_to_f64(&delta, fix), fixed_to_f64(&eps, fix));
        if !(e < 1.0) || d > 700.0 {
            return None;
        }
        let (f_lo, f, f_hi) = ((d - e).exp(), d.exp(), (d + e).exp());
        re += k.re * f;
        im += k.im * f;
        mag += kabs * f;
        err += kabs * (f_hi - f).max(f - f_lo) + k.error * f_hi;
    }
    err += mag * (terms.len() as f64 + 4.0) * f64::EPSILON;
    (re.abs().max(im.abs()) > err * (1.0 + 1e-9) + f64::MIN_POSITIVE).then_some(true)
}

/// Exact sum after dividing out the componentwise smallest monomial.
fn materialize(terms: &[(Mono, CyclotomicNumber)], cutoff_bits: u64) -> Result<CyclotomicNumber> {
    let mut lowest: BTreeMap<&BigUint, BigInt> = BTreeMap::new();
    for (m, _) in terms {
        for p in m.keys() {
            lowest.entry(p).or_insert_with(BigInt::zero);
        }
    }
    for (m, _) in terms {
        for (p, low) in lowest.iter_mut() {
            let e = m.get(*p).cloned().unwrap_or_default();
            if e < *low {
                *low = e;
            }
        }
    }
    let mut acc = CyclotomicNumber::zero();
    for (m, c) in terms {
        let mut bits = 0.0f64;
        let mut value = BigUint::one();
        for (p, low) in &lowest {
            let e = m.get(*p).cloned().unwrap_or_default() - low;
            bits += e.to_f64().unwrap_or(f64::INFINITY) * p.bits() as f64;
            if bits > cutoff_bits as f64 {
                return Err(cutoff_error(bits.min(u64::MAX as f64) as u64, cutoff_bits));
            }
            value *= p.pow(e.to_u32().expect("bounded by cutoff"));
        }
        acc = acc.add(&c.scale(&BigRational::from_integer(value.into())));
    }
    Ok(acc)
}

/// Whether `G(Phi^(n)(w)) = 0`, where `s_n` is the exponent matrix of the n-th iterate.
pub fn is_zero_at(g: &Hypersurface, point: &FactoredPoint, s_n: &Matrix, cfg: &ExactConfig) -> Result<bool> {
    let bits = super::map::max_bits(s_n);
    if bits > cfg.cutoff_bits {
        return Err(cutoff_error(bits, cfg.cutoff_bits));
    }
    let n = point.conductor();
    let raw: Vec<(Mono, CyclotomicNumber)> = g
        .terms()
        .iter()
        .map(|t| {
            let e = vec_mat(&t.exps, s_n);
            let (mono, turn) = point.monomial(&e);
            let turn = turn.to_i64().expect("reduced modulo the conductor");
            (mono, t.coeff.mul_zeta(n, turn))
        })
        .collect();
    let terms = reduce(raw, cfg.trial_limit);
    match terms.len() {
        0 => Ok(true),
        1 => Ok(false),
        _ => {
            if certify_nonzero(&terms) == Some(true) {
                return Ok(false);
            }
            Ok(materialize(&terms, cfg.cutoff_bits)?.is_zero())
        }
    }
}
