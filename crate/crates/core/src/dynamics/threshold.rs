//! Largest possible intersection step for power maps with a dominant term.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::map::{Hypersurface, MonomialMap};
use super::theorems::separated_shape;
use crate::cyclo::{embed_numeric, CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};
use crate::numeric::ln_rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    /// no intersection step is `>= n0`
    pub n0: Option<u64>,
    /// dominant coordinate (1-based)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ThresholdReport {
    fn absent(reason: &str) -> Self {
        ThresholdReport { n0: None, j0: None, rho: None, kappa: None, reason: Some(reason.to_string()) }
    }
}

/// Enclosure of `|c|`.
fn abs_interval(c: &CyclotomicNumber, precision: u32) -> Result<(BigRational, BigRational)> {
    if c.is_zero() {
        return Ok((BigRational::zero(), BigRational::zero()));
    }
    if let Some((r, _, _)) = c.as_rational_times_root() {
        return Ok((r.clone(), r));
    }
    let (lo, hi) = embed_numeric(c, precision)?.modulus_bounds();
    let cv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    Ok((cv(lo), cv(hi)))
}

const EXACT_EXPONENT_LIMIT: u64 = 1 << 22;

/// `rho^t > kappa` for every kappa in `[lo, hi]`, `false` if for none, `None` if undecided.
fn exceeds(rho: &BigRational, t: &BigUint, lo: &BigRational, hi: &BigRational) -> Option<bool> {
    let x = ln_rational(rho) * t.to_f64().unwrap_or(f64::INFINITY);
    let (lhi, llo) = (ln_rational(hi), ln_rational(lo));
    let margin = 1e-9 * (x.abs() + lhi.abs() + 1.0);
    if x > lhi + margin {
        return Some(true);
    }
    if x + margin < llo {
        return Some(false);
    }
    let t = t.to_u64().filter(|&t| t <= EXACT_EXPONENT_LIMIT)?;
    let t = i32::try_from(t).ok()?;
    let p = num_traits::pow(rho.clone(), t as usize);
    if &p > hi {
        Some(true)
    } else if &p <= lo {
        Some(false)
    } else {
        None
    }
}

pub fn dominant_term_threshold(map: &MonomialMap, g: &Hypersurface, w: &[MonomialScalar]) -> Result<ThresholdReport> {
    let m = map.dim();
    if g.dim() != m || w.len() != m {
        return Err(Error::domain("dimension mismatch between map, hypersurface and point"));
    }
    let Some(d) = map.power_degree().filter(|d| !d.is_zero()) else {
        return Ok(ThresholdReport::absent("map is not a power map X_i^d"));
    };
    let Some(shape) = separated_shape(g, m) else {
        return Ok(ThresholdReport::absent("G is not of the form sum a_j X_j^e_j"));
    };
    let mut a = vec![CyclotomicNumber::zero(); m];
    let mut e = vec![BigUint::zero(); m];
    let mut constant = None;
    for (t, s) in g.terms().iter().zip(&shape) {
        match s {
            Some((j, ej)) => {
                a[*j] = t.coeff.clone();
                e[*j] = ej.clone();
            }
            None => constant = Some(t.coeff.clone()),
        }
    }
    if let Some(c) = constant {
        let free = (0..m).find(|&j| a[j].is_zero()).expect("shape leaves a free variable");
        a[free] = c;
    }
    let j0 = (0..m).find(|&j| {
        !a[j].is_zero()
            && !e[j].is_zero()
            && (0..m).all(|i| i == j || (w[j].modulus() > w[i].modulus() && e[j] >= e[i]))
    });
    let Some(j0) = j0 else {
        return Ok(ThresholdReport::absent("no index dominates in both |w_j| and e_j"));
    };
    let small = |x: &BigUint| x.to_usize().filter(|&v| v as u64 <= EXACT_EXPONENT_LIMIT);
    let power = |q: &BigRational, x: &BigUint| small(x).map(|k| num_traits::pow(q.clone(), k));
    let others: Vec<usize> = (0..m).filter(|&j| j != j0).collect();
    let mut best: Option<BigRational> = None;
    for &j in &others {
        let v = power(w[j].modulus(), &e[j]).ok_or_else(|| Error::Resource("exponent too large".into()))?;
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v);
        }
    }
    let top = power(w[j0].modulus(), &e[j0]).ok_or_else(|| Error::Resource("exponent too large".into()))?;
    let rho = match best {
        Some(b) => top / b,
        None => return Ok(ThresholdReport { n0: Some(0), j0: Some(j0 + 1), rho: None, kappa: None, reason: None }),
    };
    let mut precision = 64;
    loop {
        let (mut a_lo, mut a_hi) = (BigRational::zero(), BigRational::zero());
        for &j in &others {
            let (lo, hi) = abs_interval(&a[j], precision)?;
            a_lo = a_lo.max(lo);
            a_hi = a_hi.max(hi);
        }
        let (l0, h0) = abs_interval(&a[j0], precision)?;
        if !l0.is_positive() {
            precision *= 4;
            continue;
        }
        let scale = BigRational::from_integer((m as i64 - 1).into());
        let k_lo = &scale * &a_lo / &h0;
        let k_hi = &scale * &a_hi / &l0;
        let kappa = Some([k_lo.to_f64().unwrap_or(0.0), k_hi.to_f64().unwrap_or(f64::INFINITY)]);
        let report = |n0: Option<u64>, reason: Option<&str>| ThresholdReport {
            n0,
            j0: Some(j0 + 1),
            rho: Some(rho.to_string()),
            kappa,
            reason: reason.map(str::to_string),
        };
        if k_hi.is_zero() {
            return Ok(report(Some(0), None));
        }
        let undecided = || {
            if precision >= 4096 {
                Err(Error::Precision("could not certify the dominant-term inequality".into()))
            } else {
                Ok(())
            }
        };
        if rho.is_one() {
            match exceeds(&rho, &BigUint::one(), &k_lo, &k_hi) {
                Some(true) => return Ok(report(Some(0), None)),
                Some(false) => return Ok(report(None, Some("the dominant term never wins"))),
                None => {
                    undecided()?;
                    precision *= 4;
                    continue;
                }
            }
        }
        if rho < BigRational::one() {
            return Ok(report(None, Some("the dominant term shrinks relative to the others")));
        }
        let mut t = BigUint::one();
        let mut n = 0u64;
        loop {
            match exceeds(&rho, &t, &k_lo, &k_hi) {
                Some(true) => return Ok(report(Some(n), None)),
                Some(false) => {
                    if d.is_one() {
                        return Ok(report(None, Some("the dominant term never wins")));
                    }
                    n += 1;
                    t *= &d;
                }
                None => {
                    undecided()?;
                    precision *= 4;
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::map::Term;

    fn pt(v: &[&str]) -> Vec<MonomialScalar> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn g(c1: i64, c2: i64) -> Hypersurface {
        Hypersurface::new(2, vec![Term::from_ints(c1, &[1, 0]), Term::from_ints(c2, &[0, 1])]).unwrap()
    }

    #[test]
    fn examples() {
        let sq = MonomialMap::power(2, 2);
        let r = dominant_term_threshold(&sq, &g(-1, 1), &pt(&["2", "3"])).unwrap();
        assert_eq!(r.n0, Some(0));
        assert_eq!(r.j0, Some(2));
        let r = dominant_term_threshold(&sq, &g(-100, 1), &pt(&["2", "3"])).unwrap();
        assert_eq!(r.n0, Some(4));
        let r = dominant_term_threshold(&sq, &g(-1, 1), &pt(&["2", "2 * zeta(3)"])).unwrap();
        assert_eq!(r.n0, None);
    }

    #[test]
    fn irrational_coefficient_uses_intervals() {
        // |1 + zeta_5| = 2 cos(pi/5) ~ 1.618 on X1; need (3/2)^(2^n) > 1.618
        let coeff = CyclotomicNumber::one().add(&CyclotomicNumber::zeta_pow(5, 1));
        let h = Hypersurface::new(
            2,
            vec![Term::new(coeff, vec![1u32.into(), 0u32.into()]), Term::from_ints(1, &[0, 1])],
        )
        .unwrap();
        let r = dominant_term_threshold(&MonomialMap::power(2, 2), &h, &pt(&["2", "3"])).unwrap();
        assert_eq!(r.n0, Some(1));
    }
}
