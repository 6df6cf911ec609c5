//! Root ratios of rational polynomials and the residue-class splitting they induce.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::recurrence::{run_recurrence, LinearRecurrence};
use crate::cyclo::field::lcm_u64;
use crate::cyclo::{cyclotomic_polynomial, euler_phi};
use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::serde_big::ser_rationals;

fn int(i: i64) -> BigRational {
    BigRational::from_integer(i.into())
}

/// Interpolate `x -> g(x)` at `0, 1, ..., deg`.
fn interpolate_from(deg: usize, start: i64, g: impl Fn(&BigRational) -> BigRational) -> QPoly {
    let xs: Vec<BigRational> = (0..=deg as i64).map(|i| int(start + i)).collect();
    let ys: Vec<BigRational> = xs.iter().map(g).collect();
    QPoly::interpolate(&xs, &ys)
}

/// `Res_y(f(y), f(xy))`; its roots are the ratios of roots of `f`.
pub fn ratio_polynomial(f: &QPoly) -> Result<QPoly> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::domain("ratio polynomial needs degree at least 1")),
    };
    if f.coeff(0).is_zero() {
        return Err(Error::domain("polynomial has the root 0"));
    }
    Ok(interpolate_from(n * n, 1, |x| {
        let mut pow = BigRational::one();
        let scaled: Vec<BigRational> = f
            .coeffs()
            .iter()
            .map(|c| {
                let v = c * &pow;
                pow *= x;
                v
            })
            .collect();
        f.resultant(&QPoly::new(scaled))
    }))
}

/// Order of the group generated by the root-of-unity ratios of distinct roots of `f`.
pub fn degeneracy_order(f: &QPoly) -> Result<u64> {
    let g = f.squarefree_part();
    let n = g.degree().unwrap_or(0);
    if n <= 1 {
        if g.coeff(0).is_zero() {
            return Err(Error::domain("polynomial has the root 0"));
        }
        return Ok(1);
    }
    let mut r = ratio_polynomial(&g)?;
    let x_minus_1 = QPoly::from_ints(&[-1, 1]);
    while !r.is_zero() && r.divisible_by(&x_minus_1)? {
        r = r.div_rem(&x_minus_1)?.0;
    }
    let n2 = (n * n) as u64;
    let kmax = 2 * n2 * n2 + 2;
    let mut d = 1;
    for k in 2..=kmax {
        let phi = euler_phi(k);
        if phi > n2 || phi as usize > r.degree().unwrap_or(0) {
            continue;
        }
        let cyc = QPoly::from_bigints(&cyclotomic_polynomial(k));
        if r.divisible_by(&cyc)? {
            d = lcm_u64(d, k);
        }
    }
    Ok(d)
}

/// Characteristic polynomial of `v_t = u_{b + tD}`: `Res_y(f(y), x - y^D)`, made monic.
pub fn power_characteristic(f: &QPoly, d: u64) -> Result<QPoly> {
    let m = f.degree().ok_or_else(|| Error::domain("zero polynomial"))?;
    if d == 1 {
        return Ok(f.monic());
    }
    let d = usize::try_from(d).map_err(|_| Error::Resource("modulus too large".into()))?;
    let r = interpolate_from(m, 0, |x| {
        let mut c = vec![BigRational::zero(); d + 1];
        c[0] = x.clone();
        c[d] = -BigRational::one();
        f.resultant(&QPoly::new(c))
    });
    Ok(r.monic())
}

/// The subsequence `u_{b}, u_{b+D}, u_{b+2D}, ...`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueClass {
    pub residue: u64,
    pub modulus: u64,
    /// relation of the same order as the parent, from the powered characteristic polynomial
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<BigRational>,
    #[serde(serialize_with = "ser_rationals")]
    pub init: Vec<BigRational>,
    pub identically_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<LinearRecurrence>,
}

impl ResidueClass {
    pub fn terms(&self, count: usize) -> Vec<BigRational> {
        run_recurrence(&self.coeffs, &self.init, count)
    }
}

pub fn residue_decompose(l: &LinearRecurrence, d: u64) -> Result<Vec<ResidueClass>> {
    if d == 0 {
        return Err(Error::domain("modulus D must be at least 1"));
    }
    let m = l.order();
    let g = power_characteristic(&l.characteristic(), d)?;
    let coeffs: Vec<BigRational> = g.coeffs()[..m].iter().rev().map(|c| -c).collect();
    let du = usize::try_from(d).map_err(|_| Error::Resource("modulus too large".into()))?;
    let u = l.terms(du * m);
    let residues: Vec<u64> = (0..d).collect();
    let classes = crate::par::map(&residues, |&b| {
        let init: Vec<BigRational> = (0..m).map(|t| u[b as usize + t * du].clone()).collect();
        let identically_zero = init.iter().all(Zero::is_zero);
        let minimal = if identically_zero {
            None
        } else {
            Some(LinearRecurrence::new(coeffs.clone(), init.clone()).map(|r| r.minimal()))
        };
        Ok(ResidueClass {
            residue: b,
            modulus: d,
            coeffs: coeffs.clone(),
            init,
            identically_zero,
            minimal: minimal.transpose()?,
        })
    });
    classes.into_iter().collect()
}

/// Merge residue-class terms back into `count` terms of the parent sequence.
pub fn interleave(classes: &[ResidueClass], count: usize) -> Vec<BigRational> {
    let d = classes.len();
    if d == 0 {
        return vec![];
    }
    let per: Vec<Vec<BigRational>> = classes.iter().map(|c| c.terms(count.div_ceil(d))).collect();
    (0..count).map(|n| per[n % d][n / d].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn ratio_polynomials() {
        // x - 2: only ratio 1
        let r = ratio_polynomial(&p(&[-2, 1])).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!(r.eval(&int(1)).is_zero());
        let r = ratio_polynomial(&p(&[-4, 0, 1])).unwrap();
        assert!(r.divisible_by(&p(&[1, 1])).unwrap());
        let r = ratio_polynomial(&p(&[-1, -1, 1])).unwrap();
        assert!(r.eval(&int(1)).is_zero());
        assert!(!r.divisible_by(&p(&[1, 1])).unwrap());
        assert!(ratio_polynomial(&p(&[0, 1])).is_err());
    }

    #[test]
    fn degeneracy_orders() {
        assert_eq!(degeneracy_order(&p(&[-1, -1, 1])).unwrap(), 1);
        assert_eq!(degeneracy_order(&p(&[-4, 0, 1])).unwrap(), 2);
        assert_eq!(degeneracy_order(&p(&[1, 0, 1])).unwrap(), 2);
        // x^3 - 8: roots 2 zeta_3^j
        assert_eq!(degeneracy_order(&p(&[-8, 0, 0, 1])).unwrap(), 3);
        // (x - 2)^2 (x + 2): repeated roots are ignored
        assert_eq!(degeneracy_order(&p(&[8, -4, -2, 1])).unwrap(), 2);
        // x^4 + 1 mixes in fourth roots of unity
        assert_eq!(degeneracy_order(&p(&[1, 0, 0, 0, 1])).unwrap(), 4);
    }

    #[test]
    fn residue_classes() {
        let l = LinearRecurrence::from_ints(&[0, 4], &[2, 0]).unwrap();
        let cls = residue_decompose(&l, 2).unwrap();
        assert!(cls[1].identically_zero);
        assert!(!cls[0].identically_zero);
        let min = cls[0].minimal.as_ref().unwrap();
        assert_eq!(min.order(), 1);
        assert_eq!(min.coeffs()[0], int(4));
        assert_eq!(min.init()[0], int(2));
        assert_eq!(interleave(&cls, 51), l.terms(51));
        let fib = LinearRecurrence::from_ints(&[1, 1], &[0, 1]).unwrap();
        let cls = residue_decompose(&fib, 1).unwrap();
        assert_eq!(cls[0].minimal.as_ref().unwrap(), &fib);
        assert_eq!(interleave(&residue_decompose(&fib, 3).unwrap(), 40), fib.terms(40));
    }
}
