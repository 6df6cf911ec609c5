//! Monomial scalars `q * zeta_N^a` with `q > 0` rational.
//!
//! The root-of-unity part is kept as a reduced fraction `a / N` of a full turn, so
//! `N` is always the minimal conductor of the scalar.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{lcm_u64, CyclotomicNumber};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialScalar {
    q: BigRational,
    turn_num: u64,
    turn_den: u64,
}

impl MonomialScalar {
    /// `q * zeta_n^a`; a negative `q` folds its sign into the root of unity.
    pub fn new(q: BigRational, a: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("root-of-unity order must be positive"));
        }
        if q.is_zero() {
            return Err(Error::domain("monomial scalar must be nonzero"));
        }
        let (q, num, den) = if q.is_negative() {
            // -1 = zeta_2, so a/n + 1/2 = (2a + n) / 2n
            (-q, 2 * a as i128 + n as i128, 2 * n)
        } else {
            (q, a as i128, n)
        };
        Ok(Self::from_turn(q, num, den))
    }

    fn from_turn(q: BigRational, num: i128, den: u64) -> Self {
        let num = num.rem_euclid(den as i128) as u64;
        let g = num.gcd(&den);
        let (num, den) = if num == 0 { (0, 1) } else { (num / g, den / g) };
        MonomialScalar { q, turn_num: num, turn_den: den }
    }

    pub fn rational(q: BigRational) -> Result<Self> {
        Self::new(q, 0, 1)
    }

    pub fn from_int(i: i64) -> Result<Self> {
        Self::rational(BigRational::from_integer(i.into()))
    }

    pub fn one() -> Self {
        MonomialScalar { q: BigRational::one(), turn_num: 0, turn_den: 1 }
    }

    /// `zeta_n^a`
    pub fn root_of_unity(a: i64, n: u64) -> Result<Self> {
        Self::new(BigRational::one(), a, n)
    }

    /// Positive rational absolute value `q`.
    pub fn modulus(&self) -> &BigRational {
        &self.q
    }

    /// Minimal `N` such that the scalar lies in Q(zeta_N).
    pub fn conductor(&self) -> u64 {
        self.turn_den
    }

    /// Exponent `a` of the root-of-unity part relative to `conductor()`.
    pub fn zeta_exp(&self) -> u64 {
        self.turn_num
    }

    /// Exponent of the root-of-unity part relative to a multiple `m` of the conductor.
    pub fn zeta_exp_in(&self, m: u64) -> Result<u64> {
        if !m.is_multiple_of(self.turn_den) {
            return Err(Error::domain(format!(
                "conductor {} does not divide {m}",
                self.turn_den
            )));
        }
        Ok(self.turn_num * (m / self.turn_den))
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.q.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_one() && self.turn_num == 0
    }

    /// Multiplicative order when the scalar is a root of unity.
    pub fn order(&self) -> Option<u64> {
        self.is_root_of_unity().then_some(self.turn_den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = lcm_u64(self.turn_den, other.turn_den);
        let num = self.turn_num as i128 * (den / self.turn_den) as i128
            + other.turn_num as i128 * (den / other.turn_den) as i128;
        Self::from_turn(&self.q * &other.q, num, den)
    }

    pub fn inv(&self) -> Self {
        Self::from_turn(self.q.recip(), -(self.turn_num as i128), self.turn_den)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Integer power; exponents are arbitrary size but the rational part is materialized.
    pub fn pow(&self, e: &BigInt) -> Self {
        let q = if e.is_negative() {
            num_traits::pow::Pow::pow(&self.q.recip(), &e.magnitude().clone())
        } else {
            num_traits::pow::Pow::pow(&self.q, e.magnitude())
        };
        let r = (e.mod_floor(&BigInt::from(self.turn_den)) * BigInt::from(self.turn_num))
            .mod_floor(&BigInt::from(self.turn_den));
        Self::from_turn(q, r.to_i128().unwrap(), self.turn_den)
    }

    pub fn pow_u(&self, e: &BigUint) -> Self {
        self.pow(&BigInt::from_biguint(Sign::Plus, e.clone()))
    }

    /// Exact image in Q(zeta_m), `m` a multiple of the conductor.
    pub fn to_cyclotomic_in(&self, m: u64) -> Result<CyclotomicNumber> {
        let a = self.zeta_exp_in(m)?;
        Ok(CyclotomicNumber::zeta_pow(m, a as i64).scale(&self.q))
    }

    pub fn to_cyclotomic(&self) -> CyclotomicNumber {
        self.to_cyclotomic_in(self.turn_den).expect("own conductor")
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for MonomialScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turn_den {
            1 => write!(f, "{}", fmt_rat(&self.q)),
            2 => write!(f, "-{}", fmt_rat(&self.q)),
            n => write!(f, "{} * zeta({n})^{}", fmt_rat(&self.q), self.turn_num),
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}

/// Parses `zeta(N)` or `zeta(N)^a`.
fn parse_zeta(s: &str) -> Result<(i64, u64)> {
    let bad = || Error::Parse(format!("invalid root of unity '{s}'"));
    let rest = s.trim().strip_prefix("zeta(").ok_or_else(bad)?;
    let (n, tail) = rest.split_once(')').ok_or_else(bad)?;
    let n: u64 = n.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    let tail = tail.trim();
    let a = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^').ok_or_else(bad)?.trim().parse::<i64>().map_err(|_| bad())?
    };
    Ok((a, n))
}

/// Parse a rational-or-monomial string that may denote zero; returns `None` for zero.
pub fn parse_scalar_or_zero(s: &str) -> Result<Option<MonomialScalar>> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) if rest.trim_start().starts_with("zeta") => (-1, rest.trim()),
        _ => (1, t),
    };
    let (q, root) = if body.starts_with("zeta") {
        (BigRational::from_integer(sign.into()), Some(parse_zeta(body)?))
    } else if let Some((r, z)) = body.split_once('*') {
        (parse_rational(r)?, Some(parse_zeta(z)?))
    } else {
        (parse_rational(body)?, None)
    };
    if q.is_zero() {
        return Ok(None);
    }
    let (a, n) = root.unwrap_or((0, 1));
    MonomialScalar::new(q, a, n).map(Some)
}

impl FromStr for MonomialScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_scalar_or_zero(s)?.ok_or_else(|| Error::domain(format!("scalar '{s}' is zero")))
    }
}

impl serde::Serialize for MonomialScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for MonomialScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
