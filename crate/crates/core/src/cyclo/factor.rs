//! Trial-division factorization with a Miller-Rabin check on the cofactor.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_LIMIT: u64 = 1_000_000;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &MR_BASES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Bound below which `is_probable_prime` is a proof of primality.
fn mr_certified_below() -> BigUint {
    "3317044064679887385961981".parse().unwrap()
}

/// Deterministic Miller-Rabin for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Complete factorization `n = prod p^e`; fails when a cofactor cannot be certified prime.
pub fn factor_biguint(n: &BigUint, trial_limit: u64) -> Result<BTreeMap<BigUint, u64>> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let mut m = n.clone();
    if let Some(small) = m.to_u64() {
        // fast path for machine words
        let mut x = small;
        let mut p = 2u64;
        while p <= trial_limit && p * p <= x {
            while x % p == 0 {
                *out.entry(BigUint::from(p)).or_insert(0) += 1;
                x /= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if x == 1 {
            return Ok(out);
        }
        m = BigUint::from(x);
        if p * p > x || is_prime_u64(x) {
            *out.entry(m).or_insert(0) += 1;
            return Ok(out);
        }
        return Err(Error::Factorization(format!(
            "{n}: cofactor {x} has no factor below {trial_limit}"
        )));
    }
    let mut p = 2u64;
    while p <= trial_limit {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            *out.entry(pb.clone()).or_insert(0) += 1;
            m = q;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    let limit_sq = BigUint::from(trial_limit) * BigUint::from(trial_limit);
    let pb = BigUint::from(p);
    if &pb * &pb > m || m < limit_sq || (m < mr_certified_below() && is_probable_prime(&m)) {
        *out.entry(m).or_insert(0) += 1;
        return Ok(out);
    }
    Err(Error::Factorization(format!(
        "{n}: cofactor {m} could not be factored or certified prime"
    )))
}

/// Signed prime-exponent map of a positive rational.
pub fn factor_rational(q: &BigRational, trial_limit: u64) -> Result<BTreeMap<BigUint, i64>> {
    if q.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let mut out: BTreeMap<BigUint, i64> = BTreeMap::new();
    for (p, e) in factor_biguint(q.numer().magnitude(), trial_limit)? {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factor_biguint(q.denom().magnitude(), trial_limit)? {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.retain(|_, e| *e != 0);
    Ok(out)
}
