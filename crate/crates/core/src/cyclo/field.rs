//! Exact arithmetic in cyclotomic fields Q(zeta_N), power-basis representation.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::QPoly;

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Distinct prime divisors of a machine integer.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest first) of the N-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    let arc = Arc::new(num);
    cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * d;
        }
        quot[i - dd] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Reduce a coefficient vector modulo the monic integer polynomial `modulus`, in place.
fn reduce_mod(coeffs: &mut Vec<BigRational>, modulus: &[BigInt]) {
    let deg = modulus.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        if coeffs[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut coeffs[i]);
        for (j, m) in modulus.iter().enumerate().take(deg) {
            if !m.is_zero() {
                coeffs[i - deg + j] -= &c * m;
            }
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, BigRational::zero());
}

/// An element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi(N)-1).
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    /// Build from arbitrary coefficients of powers of zeta_N; reduces modulo Phi_N.
    pub fn from_powers(conductor: u64, mut coeffs: Vec<BigRational>) -> Self {
        assert!(conductor >= 1);
        let phi = cyclotomic_polynomial(conductor);
        if coeffs.len() < phi.len() - 1 {
            coeffs.resize(phi.len() - 1, BigRational::zero());
        }
        reduce_mod(&mut coeffs, &phi);
        CyclotomicNumber { conductor, coeffs }
    }

    /// Already-reduced coordinates; length must equal phi(N).
    pub fn from_coords(conductor: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::domain("conductor must be positive"));
        }
        if coeffs.len() as u64 != euler_phi(conductor) {
            return Err(Error::domain(format!(
                "conductor {conductor} needs {} coefficients, got {}",
                euler_phi(conductor),
                coeffs.len()
            )));
        }
        Ok(CyclotomicNumber { conductor, coeffs })
    }

    pub fn rational(q: BigRational) -> Self {
        CyclotomicNumber { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_int(i: i64) -> Self {
        Self::rational(BigRational::from_integer(i.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `zeta_N^a`
    pub fn zeta_pow(conductor: u64, a: i64) -> Self {
        let e = a.rem_euclid(conductor as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self::from_powers(conductor, v)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when the number lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_M); requires `N | M`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.conductor) {
            return Err(Error::domain(format!(
                "cannot lift conductor {} to {target}",
                self.conductor
            )));
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::from_powers(target, v))
    }

    /// Galois image under `zeta -> zeta^a`, `gcd(a, N) = 1`.
    pub fn galois(&self, a: u64) -> Self {
        let n = self.conductor;
        let mut v = vec![BigRational::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[((k as u64 * a) % n) as usize] += c;
        }
        Self::from_powers(n, v)
    }

    /// Smallest `M` with `self` in Q(zeta_M).
    pub fn minimal_conductor(&self) -> u64 {
        let n = self.conductor;
        let units: Vec<u64> = (1..n.max(2)).filter(|a| a.gcd(&n) == 1).collect();
        for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
            if units.iter().filter(|&&a| a % m == 1 % m).all(|&a| self.galois(a) == *self) {
                return m;
            }
        }
        n
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let n = lcm_u64(self.conductor, other.conductor);
        (self.lift(n).unwrap(), other.lift(n).unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicNumber { conductor: a.conductor, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        if a.conductor <= 2 {
            return CyclotomicNumber {
                conductor: a.conductor,
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
            };
        }
        let mut out = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Self::from_powers(a.conductor, out)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo Phi_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus = QPoly::from_bigints(&cyclotomic_polynomial(self.conductor));
        let x = QPoly::new(self.coeffs.clone());
        let (g, s, _) = x.xgcd(&modulus);
        if !g.is_constant() {
            return Err(Error::Internal("cyclotomic polynomial not irreducible".into()));
        }
        Ok(Self::from_powers(self.conductor, s.coeffs().to_vec()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one().lift(self.conductor).unwrap();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self * zeta_N^a` where N is `self`'s conductor lifted as needed.
    pub fn mul_zeta(&self, conductor: u64, a: i64) -> Self {
        self.mul(&Self::zeta_pow(conductor, a))
    }

    /// Content: positive rational `c` such that `self / c` has coprime integer coordinates.
    pub fn content(&self) -> BigRational {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(&(c * &den).to_integer());
        }
        if g.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(g.abs(), den)
    }

    /// Find `(r, a, M)` with `self = r * zeta_M^a`, r a positive rational, when such a form exists.
    pub fn as_rational_times_root(&self) -> Option<(BigRational, u64, u64)> {
        if self.is_zero() {
            return None;
        }
        let n = self.conductor;
        let big = if n % 2 == 1 { 2 * n } else { n };
        let lifted = self.lift(big).ok()?;
        for a in 0..big {
            let rotated = lifted.mul(&Self::zeta_pow(big, -(a as i64)));
            if let Some(r) = rotated.as_rational() {
                if r.is_positive() {
                    return Some((r, a, big));
                }
            }
        }
        None
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]@zeta({})", self.conductor)
    }
}

impl serde::Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        if let Some(q) = self.as_rational() {
            return s.serialize_str(&q.to_string());
        }
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        let mut st = s.serialize_struct("CyclotomicNumber", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum CyclotomicRepr {
    Int(i64),
    Scalar(String),
    Coords { conductor: u64, coeffs: Vec<String> },
}

impl<'de> serde::Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CyclotomicRepr::deserialize(d)? {
            CyclotomicRepr::Int(i) => Ok(CyclotomicNumber::from_int(i)),
            CyclotomicRepr::Scalar(s) => super::scalar::parse_scalar_or_zero(&s)
                .map(|v| v.map_or_else(CyclotomicNumber::zero, |v| v.to_cyclotomic()))
                .map_err(D::Error::custom),
            CyclotomicRepr::Coords { conductor, coeffs } => {
                let coeffs = coeffs
                    .iter()
                    .map(|c| super::scalar::parse_rational(c))
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                CyclotomicNumber::from_coords(conductor, coeffs).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        let c = |n| cyclotomic_polynomial(n).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(c(1), "-1,1");
        assert_eq!(c(4), "1,0,1");
        assert_eq!(c(12), "1,0,-1,0,1");
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn field_examples() {
        let z4 = CyclotomicNumber::zeta_pow(4, 1);
        assert!(z4.add(&CyclotomicNumber::zeta_pow(4, 3)).is_zero());
        let z3 = CyclotomicNumber::zeta_pow(3, 1);
        let sq = z3.mul(&z3);
        assert_eq!(sq.coeffs(), &[q(-1, 1), q(-1, 1)]);
        assert_eq!(CyclotomicNumber::from_int(2).inv().unwrap(), CyclotomicNumber::rational(q(1, 2)));
        assert_eq!(CyclotomicNumber::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_conductors_lift() {
        let a = CyclotomicNumber::zeta_pow(3, 1);
        let b = CyclotomicNumber::zeta_pow(4, 1);
        let s = a.add(&b);
        assert_eq!(s.conductor(), 12);
        assert_eq!(s.sub(&b), a);
    }

    #[test]
    fn rational_times_root_detection() {
        let x = CyclotomicNumber::zeta_pow(6, 1).scale(&q(-3, 2));
        let (r, a, n) = x.as_rational_times_root().unwrap();
        assert_eq!(r, q(3, 2));
        assert_eq!(CyclotomicNumber::zeta_pow(n, a as i64).scale(&r), x);
        assert!(CyclotomicNumber::one().add(&CyclotomicNumber::zeta_pow(5, 1)).as_rational_times_root().is_none());
    }

    #[test]
    fn minimal_conductors() {
        let i = CyclotomicNumber::zeta_pow(4, 1).lift(12).unwrap();
        assert_eq!(i.conductor(), 12);
        assert_eq!(i.minimal_conductor(), 4);
        assert_eq!(CyclotomicNumber::from_int(3).lift(15).unwrap().minimal_conductor(), 1);
        // zeta_3 + zeta_3^2 = -1
        let z = CyclotomicNumber::zeta_pow(3, 1).add(&CyclotomicNumber::zeta_pow(3, 2));
        assert_eq!(z.minimal_conductor(), 1);
        assert_eq!(CyclotomicNumber::zeta_pow(5, 1).minimal_conductor(), 5);
    }

    #[test]
    fn serde_round_trip() {
        let x = CyclotomicNumber::zeta_pow(5, 2).scale(&q(7, 3)).add(&CyclotomicNumber::from_int(1));
        let j = serde_json::to_string(&x).unwrap();
        let y: CyclotomicNumber = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
        let z: CyclotomicNumber = serde_json::from_str("\"-12\"").unwrap();
        assert_eq!(z, CyclotomicNumber::from_int(-12));
        let zero: CyclotomicNumber = serde_json::from_str("\"0\"").unwrap();
        assert!(zero.is_zero());
    }
}
