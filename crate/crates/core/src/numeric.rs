//! Floating-point helpers that stay finite for astronomically large integers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `(mantissa, exponent)` with `x ~ mantissa * 2^exponent`, mantissa in [0.5, 1).
pub fn biguint_frexp(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits == 0 {
        return (0.0, 0);
    }
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap() as f64;
    // top < 2^64, so top / 2^64 lies in [0.5, 1) up to rounding
    let m = top / 18446744073709551616.0;
    (m, (shift + 64) as i64)
}

/// Natural log of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let (m, e) = biguint_frexp(x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(q: &BigRational) -> f64 {
    ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude())
}

/// Signed big integer to f64 (saturating to infinity).
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    let (m, e) = biguint_frexp(x.magnitude());
    let v = if e > 1100 { f64::INFINITY } else { m * 2f64.powi(e as i32) };
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// `x / 2^p` as f64.
pub fn fixed_to_f64(x: &BigInt, p: u32) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (m, e) = biguint_frexp(x.magnitude());
    let v = scale_pow2(m, e - p as i64);
    if x.is_negative() {
        -v
    } else {
        v
    }
}

fn scale_pow2(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e as i32)
}

/// Round a non-negative bound upward by a relative margin.
pub fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

pub fn down(x: f64) -> f64 {
    (x * (1.0 - 4.0 * f64::EPSILON) - f64::MIN_POSITIVE).max(0.0)
}

/// `2 atanh(z)` for `z = num / den` in fixed point with `p` fractional bits.
fn atanh2_fixed(num: &BigInt, den: &BigInt, p: u32) -> BigInt {
    let z = (num << p) / den;
    let z2 = (&z * &z) >> p;
    let mut term = z;
    let mut acc = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        acc += &term / BigInt::from(k);
        term = (&term * &z2) >> p;
        k += 2;
    }
    acc << 1
}

/// `ln(x) * 2^p`, rounded, with an error of a few units in the last place.
pub fn ln_biguint_fixed(x: &BigUint, p: u32) -> BigInt {
    assert!(!x.is_zero(), "logarithm of zero");
    let q = p + 32;
    let k = x.bits() - 1;
    let one = BigInt::from(1) << q;
    let m = if k > q as u64 {
        BigInt::from(x >> (k - q as u64))
    } else {
        BigInt::from(x.clone()) << (q as u64 - k)
    };
    let ln_m = atanh2_fixed(&(&m - &one), &(&m + &one), q);
    let ln2 = atanh2_fixed(&BigInt::from(1), &BigInt::from(3), q);
    let total = ln_m + ln2 * BigInt::from(k);
    (total + (BigInt::from(1) << 31)) >> 32
}
