//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// `x - c`
    pub fn linear_root(c: BigRational) -> Self {
        Self::new(vec![-c, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// Euclidean division, `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] * &lead_inv;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Self) -> Result<bool> {
        Ok(self.rem(divisor)?.is_zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Monic scaling; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// `self / gcd(self, self')`: the product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd nonzero").0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Largest root multiplicity (0 for constants).
    pub fn max_multiplicity(&self) -> usize {
        let mut h = self.clone();
        let mut count = 0;
        while !h.is_constant() {
            h = h.gcd(&h.derivative());
            count += 1;
        }
        count
    }

    /// Resultant over the rationals by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> BigRational {
        let (Some(mut da), Some(mut db)) = (self.degree(), other.degree()) else {
            return BigRational::zero();
        };
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = BigRational::one();
        loop {
            if db == 0 {
                return acc * pow_rat(&b.leading(), da as u64);
            }
            let r = a.rem(&b).expect("nonzero divisor");
            let Some(dr) = r.degree() else {
                return BigRational::zero();
            };
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= pow_rat(&b.leading(), (da - dr) as u64);
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<BigRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = QPoly::zero();
        for i in (0..n).rev() {
            acc = acc.mul(&QPoly::linear_root(xs[i].clone())).add(&QPoly::constant(dd[i].clone()));
        }
        acc
    }

    /// Multiply through so that all coefficients are coprime integers with positive leading term.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

pub(crate) fn pow_rat(x: &BigRational, e: u64) -> BigRational {
    num_traits::pow::Pow::pow(x, &num_bigint::BigUint::from(e))
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        QPoly::from_ints(v)
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = q(&[1, 2, 3, 4, 5]);
        let b = q(&[-1, 0, 2]);
        let (qq, r) = a.div_rem(&b).unwrap();
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x-2, x-5) = 2 - 5 ... with the convention prod g(roots of f)
        let f = q(&[-2, 1]);
        let g = q(&[-5, 1]);
        assert_eq!(f.resultant(&g), BigRational::from_integer((-3).into()));
        // Res(x^2-1, x^2-4) = prod over roots of f of g(r) = (1-4)(1-4) = 9
        assert_eq!(q(&[-1, 0, 1]).resultant(&q(&[-4, 0, 1])), BigRational::from_integer(9.into()));
        assert!(q(&[-1, 0, 1]).resultant(&q(&[1, 1])).is_zero());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = q(&[3, -1, 0, 2]);
        let xs: Vec<BigRational> = (1..=4).map(|i| BigRational::from_integer(i.into())).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(QPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn squarefree_and_multiplicity() {
        // (x-1)^3 (x+2)
        let p = q(&[-1, 1]).pow(3).mul(&q(&[2, 1]));
        assert_eq!(p.squarefree_part(), q(&[-1, 1]).mul(&q(&[2, 1])));
        assert_eq!(p.max_multiplicity(), 3);
        assert!(!p.is_squarefree());
        assert_eq!(q(&[-1, -1, 1]).max_multiplicity(), 1);
    }

    #[test]
    fn xgcd_identity() {
        let a = q(&[1, 0, 1]);
        let b = q(&[1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, QPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
