//! Exponential polynomials `F(z) = sum f_i(z) alpha_i^z`.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclo::field::lcm_u64;
use crate::cyclo::{euler_phi, CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm {
    /// coefficients of `f_i`, lowest degree first
    pub poly: Vec<CyclotomicNumber>,
    pub alpha: MonomialScalar,
}

impl ExpTerm {
    pub fn new(mut poly: Vec<CyclotomicNumber>, alpha: MonomialScalar) -> Self {
        while poly.last().is_some_and(CyclotomicNumber::is_zero) {
            poly.pop();
        }
        ExpTerm { poly, alpha }
    }

    pub fn degree(&self) -> usize {
        self.poly.len().saturating_sub(1)
    }

    pub fn eval_poly(&self, n: u64) -> CyclotomicNumber {
        let x = BigRational::from_integer(n.into());
        self.poly.iter().rev().fold(CyclotomicNumber::zero(), |acc, c| acc.scale(&x).add(c))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExpTerm>", into = "Vec<ExpTerm>")]
pub struct ExponentialPolynomial {
    terms: Vec<ExpTerm>,
}

impl TryFrom<Vec<ExpTerm>> for ExponentialPolynomial {
    type Error = Error;
    fn try_from(t: Vec<ExpTerm>) -> Result<Self> {
        ExponentialPolynomial::new(t)
    }
}

impl From<ExponentialPolynomial> for Vec<ExpTerm> {
    fn from(f: ExponentialPolynomial) -> Self {
        f.terms
    }
}

impl ExponentialPolynomial {
    pub fn new(terms: Vec<ExpTerm>) -> Result<Self> {
        let terms: Vec<ExpTerm> = terms.into_iter().map(|t| ExpTerm::new(t.poly, t.alpha)).collect();
        if terms.is_empty() {
            return Err(Error::domain("exponential polynomial needs at least one term"));
        }
        if let Some(i) = terms.iter().position(|t| t.poly.is_empty()) {
            return Err(Error::domain(format!("polynomial of term {} is zero", i + 1)));
        }
        for (i, t) in terms.iter().enumerate() {
            if let Some(j) = terms[..i].iter().position(|s| s.alpha == t.alpha) {
                return Err(Error::domain(format!("terms {} and {} share the base {}", j + 1, i + 1, t.alpha)));
            }
        }
        Ok(ExponentialPolynomial { terms })
    }

    /// Constant coefficients, one per base.
    pub fn simple(pairs: &[(CyclotomicNumber, MonomialScalar)]) -> Result<Self> {
        Self::new(pairs.iter().map(|(c, a)| ExpTerm::new(vec![c.clone()], a.clone())).collect())
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn alphas(&self) -> Vec<MonomialScalar> {
        self.terms.iter().map(|t| t.alpha.clone()).collect()
    }

    /// `k`
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// `m = sum (deg f_i + 1)`, the order of the matching recurrence
    pub fn order(&self) -> usize {
        self.terms.iter().map(|t| t.degree() + 1).sum()
    }

    /// `a = max (deg f_i + 1)`
    pub fn poly_bound(&self) -> usize {
        self.terms.iter().map(|t| t.degree() + 1).max().unwrap_or(1)
    }

    pub fn is_simple(&self) -> bool {
        self.terms.iter().all(|t| t.degree() == 0)
    }

    pub fn eval(&self, n: u64) -> CyclotomicNumber {
        let e = BigUint::from(n);
        self.terms.iter().fold(CyclotomicNumber::zero(), |acc, t| {
            acc.add(&t.eval_poly(n).mul(&t.alpha.pow_u(&e).to_cyclotomic()))
        })
    }

    /// Conductor of the field generated by the bases and coefficients.
    pub fn field_conductor(&self) -> u64 {
        let mut l = 1;
        for t in &self.terms {
            l = lcm_u64(l, t.alpha.conductor());
            for c in &t.poly {
                l = lcm_u64(l, c.minimal_conductor());
            }
        }
        if l % 4 == 2 {
            l / 2
        } else {
            l
        }
    }

    pub fn field_degree(&self) -> u64 {
        euler_phi(self.field_conductor())
    }
}

/// Whether `(Z/N)^*` is cyclic, i.e. `Q(zeta_N)` is a cyclic extension.
pub fn cyclotomic_field_is_cyclic(n: u64) -> bool {
    let odd = if n.is_multiple_of(2) { n / 2 } else { n };
    if n.is_multiple_of(4) {
        return n == 4;
    }
    let ps = crate::cyclo::field::prime_divisors(odd);
    ps.len() <= 1
}
