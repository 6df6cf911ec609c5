//! Complex embedding zeta_N -> exp(2 pi i / N) with a certified error bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::field::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::numeric::{down, fixed_to_f64, up};

const GUARD_BITS: u32 = 32;

/// Fixed-point approximation `(re + i im) / 2^scale` with error at most `err / 2^scale` per part.
#[derive(Clone, Debug)]
pub struct Embedding {
    re: BigInt,
    im: BigInt,
    err: BigInt,
    scale: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    /// bound on the absolute error of each part
    pub error: f64,
}

impl Embedding {
    pub fn approx(&self) -> ComplexApprox {
        let re = fixed_to_f64(&self.re, self.scale);
        let im = fixed_to_f64(&self.im, self.scale);
        let err = fixed_to_f64(&self.err, self.scale);
        let rounding = if exact_in_f64(&self.re) && exact_in_f64(&self.im) {
            0.0
        } else {
            re.abs().max(im.abs()) * f64::EPSILON
        };
        let error = if self.err.is_zero() && rounding == 0.0 { 0.0 } else { up(err + rounding) };
        ComplexApprox { re, im, error }
    }

    /// Certified enclosure `[lo, hi]` of the modulus.
    pub fn modulus_bounds(&self) -> (f64, f64) {
        let norm2 = &self.re * &self.re + &self.im * &self.im;
        let root: BigInt = norm2.sqrt();
        // |z| within sqrt(2) * err of |approx|; the isqrt floor costs one more unit
        let slack = &self.err * 2 + 1;
        let lo: BigInt = &root - &slack;
        let hi = &root + &slack + 1;
        let lo = if lo.is_positive() { down(fixed_to_f64(&lo, self.scale)) } else { 0.0 };
        (lo, up(fixed_to_f64(&hi, self.scale)))
    }

    pub fn is_certainly_nonzero(&self) -> bool {
        self.modulus_bounds().0 > 0.0
    }
}

fn exact_in_f64(x: &BigInt) -> bool {
    match x.trailing_zeros() {
        None => true,
        Some(tz) => x.bits() - tz <= 53,
    }
}

fn atan_inv(x: u64, p: u32) -> BigInt {
    // sum (-1)^k / ((2k+1) x^(2k+1)), fixed point
    let one = BigInt::one() << p;
    let x2 = BigInt::from(x * x);
    let mut power = one / BigInt::from(x);
    let mut acc = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power /= &x2;
        k += 1;
    }
    acc
}

fn pi_fixed(p: u32) -> BigInt {
    atan_inv(5, p) * 16 - atan_inv(239, p) * 4
}

/// `(cos, sin)` of `2 pi k / n` in fixed point with scale `p`.
fn cos_sin(k: u64, n: u64, p: u32, pi: &BigInt) -> (BigInt, BigInt) {
    let one = BigInt::one() << p;
    let mut kk = (k % n) as i64;
    if 2 * kk > n as i64 {
        kk -= n as i64;
    }
    if kk == 0 {
        return (one, BigInt::zero());
    }
    let theta = pi * BigInt::from(2 * kk) / BigInt::from(n);
    let theta2 = (&theta * &theta) >> p;
    let mut cos = one.clone();
    let mut sin = theta.clone();
    let mut term_c = one;
    let mut term_s = theta;
    let mut j = 1u64;
    loop {
        term_c = -((&term_c * &theta2) >> p) / BigInt::from((2 * j - 1) * (2 * j));
        term_s = -((&term_s * &theta2) >> p) / BigInt::from((2 * j) * (2 * j + 1));
        if term_c.is_zero() && term_s.is_zero() {
            break;
        }
        cos += &term_c;
        sin += &term_s;
        j += 1;
    }
    (cos, sin)
}

/// Embed `x` numerically with at least `precision` bits of absolute accuracy per unit coefficient.
pub fn embed_numeric(x: &CyclotomicNumber, precision: u32) -> Result<Embedding> {
    if precision < 53 {
        return Err(Error::domain("precision must be at least 53 bits"));
    }
    let p = precision + GUARD_BITS;
    let n = x.conductor();
    let pi = pi_fixed(p + 8) >> 8u32;
    // per trigonometric value: truncation over at most ~p series terms plus the pi error
    let trig_err = BigInt::from(4 * p as u64 + 64);
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let mut err = BigInt::zero();
    for (k, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (cs, sn) = cos_sin(k as u64, n, p, &pi);
        let (num, den) = (c.numer(), c.denom());
        let (qr, rr) = (num * &cs).div_rem(den);
        let (qi, ri) = (num * &sn).div_rem(den);
        re += qr;
        im += qi;
        if k != 0 {
            // |c| * trig_err, rounded up
            err += (num.abs() * &trig_err).div_ceil(den);
        }
        if !rr.is_zero() || !ri.is_zero() {
            err += 1;
        }
    }
    Ok(Embedding { re, im, err, scale: p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rational_embeds_exactly() {
        let e = embed_numeric(&CyclotomicNumber::from_int(2), 53).unwrap().approx();
        assert_eq!((e.re, e.im, e.error), (2.0, 0.0, 0.0));
    }

    #[test]
    fn fourth_root_is_i() {
        let e = embed_numeric(&CyclotomicNumber::zeta_pow(4, 1), 53).unwrap().approx();
        assert!(e.re.abs() < 2f64.powi(-50));
        assert!((e.im - 1.0).abs() < 2f64.powi(-50));
        assert!(e.error < 2f64.powi(-50));
    }

    #[test]
    fn one_plus_cube_root_has_unit_modulus() {
        let x = CyclotomicNumber::one().add(&CyclotomicNumber::zeta_pow(3, 1));
        let (lo, hi) = embed_numeric(&x, 53).unwrap().modulus_bounds();
        assert!(lo <= 1.0 && 1.0 <= hi && hi - lo < 1e-12);
    }

    #[test]
    fn higher_precision_tightens() {
        let x = CyclotomicNumber::zeta_pow(7, 2).scale(&BigRational::new(1.into(), 3.into()));
        let a = embed_numeric(&x, 53).unwrap().approx();
        let b = embed_numeric(&x, 200).unwrap().approx();
        assert!(b.error <= a.error);
        let angle = 4.0 * std::f64::consts::PI / 7.0;
        assert!((a.re - angle.cos() / 3.0).abs() <= a.error + 1e-15);
        assert!((a.im - angle.sin() / 3.0).abs() <= a.error + 1e-15);
    }
}
