//! Linear recurrences with rational coefficients.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::serde_big::{de_rationals, ser_rationals};

/// `u_{n+m} = a_1 u_{n+m-1} + ... + a_m u_n`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RecurrenceRepr", into = "RecurrenceRepr")]
pub struct LinearRecurrence {
    coeffs: Vec<BigRational>,
    init: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecurrenceRepr {
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    coeffs: Vec<BigRational>,
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    init: Vec<BigRational>,
}

impl TryFrom<RecurrenceRepr> for LinearRecurrence {
    type Error = Error;
    fn try_from(r: RecurrenceRepr) -> Result<Self> {
        LinearRecurrence::new(r.coeffs, r.init)
    }
}

impl From<LinearRecurrence> for RecurrenceRepr {
    fn from(l: LinearRecurrence) -> Self {
        RecurrenceRepr { coeffs: l.coeffs, init: l.init }
    }
}

/// Extend `init` by the recurrence with coefficients `coeffs` to `count` terms.
pub(crate) fn run_recurrence(coeffs: &[BigRational], init: &[BigRational], count: usize) -> Vec<BigRational> {
    let m = coeffs.len();
    let mut u: Vec<BigRational> = init.iter().take(count).cloned().collect();
    while u.len() < count {
        let n = u.len();
        let next = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .fold(BigRational::zero(), |acc, (i, a)| acc + a * &u[n - 1 - i]);
        u.push(next);
    }
    debug_assert!(m == init.len());
    u
}

impl LinearRecurrence {
    pub fn new(coeffs: Vec<BigRational>, init: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("recurrence order must be at least 1"));
        }
        if coeffs.len() != init.len() {
            return Err(Error::domain(format!(
                "order {} needs {} initial terms, got {}",
                coeffs.len(),
                coeffs.len(),
                init.len()
            )));
        }
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(Error::domain("last coefficient a_m must be nonzero"));
        }
        if init.iter().all(Zero::is_zero) {
            return Err(Error::domain("initial terms must not all vanish"));
        }
        Ok(LinearRecurrence { coeffs, init })
    }

    pub fn from_ints(coeffs: &[i64], init: &[i64]) -> Result<Self> {
        let q = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::new(q(coeffs), q(init))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn init(&self) -> &[BigRational] {
        &self.init
    }

    /// `u_0, ..., u_{count-1}`
    pub fn terms(&self, count: usize) -> Vec<BigRational> {
        run_recurrence(&self.coeffs, &self.init, count)
    }

    /// `u_{-count}, ..., u_{-1}`, using `a_m != 0`.
    pub fn backward(&self, count: usize) -> Vec<BigRational> {
        let m = self.order();
        let am = &self.coeffs[m - 1];
        // window holds u_{n+1}, ..., u_{n+m} while computing u_n
        let mut window: Vec<BigRational> = self.init.clone();
        let mut out = vec![];
        for _ in 0..count {
            let mut s = window[m - 1].clone();
            for i in 1..m {
                s -= &self.coeffs[i - 1] * &window[m - 1 - i];
            }
            let un = s / am;
            window.pop();
            window.insert(0, un.clone());
            out.push(un);
        }
        out.reverse();
        out
    }

    /// `x^m - a_1 x^(m-1) - ... - a_m`
    pub fn characteristic(&self) -> QPoly {
        let mut c: Vec<BigRational> = self.coeffs.iter().rev().map(|a| -a).collect();
        c.push(BigRational::one());
        QPoly::new(c)
    }

    /// Least order of a relation satisfied by the sequence (rank of the Hankel matrix).
    pub fn minimal_order(&self) -> usize {
        let m = self.order();
        let u = self.terms(2 * m - 1);
        rank(hankel(&u, m))
    }

    /// The same sequence under a relation of least order.
    pub fn minimal(&self) -> LinearRecurrence {
        let r = self.minimal_order();
        if r == self.order() {
            return self.clone();
        }
        let u = self.terms(2 * r);
        let rhs: Vec<BigRational> = u[r..2 * r].to_vec();
        // u_{n+r} = sum_j c_j u_{n+j}
        let c = solve(hankel(&u, r), rhs).expect("leading Hankel minor of the minimal order is nonsingular");
        let coeffs: Vec<BigRational> = c.into_iter().rev().collect();
        LinearRecurrence::new(coeffs, u[..r].to_vec()).expect("minimal relation keeps a nonzero trailing term")
    }
}

fn hankel(u: &[BigRational], r: usize) -> Vec<Vec<BigRational>> {
    (0..r).map(|i| (0..r).map(|j| u[i + j].clone()).collect()).collect()
}

/// Row echelon form in place; returns pivot columns.
fn echelon(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(mut a: Vec<Vec<BigRational>>) -> usize {
    echelon(&mut a).len()
}

/// Solution of a nonsingular square system.
pub(crate) fn solve(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a.into_iter().zip(b).map(|(mut r, x)| {
        r.push(x);
        r
    }).collect();
    let piv = echelon(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some((0..n).map(|i| &aug[i][n] / &aug[i][i]).collect())
}
