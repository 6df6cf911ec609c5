//! Multiplicative relations among monomial scalars.
//!
//! A relation is an integer vector `k` with `prod values_i^k_i = 1`. The relation
//! lattice is the integer kernel of the prime-exponent matrix intersected with the
//! congruence imposed by the root-of-unity parts.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::factor::{factor_rational, DEFAULT_TRIAL_LIMIT};
use super::field::lcm_u64;
use super::scalar::MonomialScalar;
use crate::error::{Error, Result};

/// Basis of the lattice of multiplicative relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationLattice {
    pub dimension: usize,
    #[serde(serialize_with = "crate::serde_big::ser_bigint_vecs")]
    pub basis: Vec<Vec<BigInt>>,
}

impl RelationLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Basis (as columns, returned as row vectors) of `{x in Z^n : A x = 0}`.
///
/// Column operations are unimodular, so the returned vectors generate the full
/// integer kernel rather than a finite-index sublattice.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    // u[j] is column j of the transform, stored as a row vector
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == n {
            break;
        }
        loop {
            // pick the nonzero entry of smallest magnitude among free columns
            let best = (pivot..n)
                .filter(|&c| !a[r][c].is_zero())
                .min_by(|&x, &y| a[r][x].abs().cmp(&a[r][y].abs()));
            let Some(best) = best else { break };
            swap_cols(&mut a, &mut u, pivot, best);
            let mut done = true;
            for c in pivot + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][pivot]);
                sub_col(&mut a, &mut u, c, pivot, &q);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    let mut basis: Vec<Vec<BigInt>> = u.into_iter().skip(pivot).collect();
    size_reduce(&mut basis);
    for v in &mut basis {
        normalize_sign(v);
    }
    basis
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    u.swap(i, j);
}

/// column `c` -= q * column `p`
fn sub_col(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], c: usize, p: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let t = &row[p] * q;
        row[c] -= t;
    }
    let up = u[p].clone();
    for (x, y) in u[c].iter_mut().zip(up) {
        *x -= y * q;
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greedy pairwise size reduction; keeps the lattice, shortens certificates.
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = dot(&basis[j], &basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let num = dot(&basis[i], &basis[j]);
                // nearest integer to num / nj
                let twice: BigInt = &num * 2 + &nj;
                let q = twice.div_floor(&(&nj * 2));
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> =
                    basis[i].iter().zip(&basis[j]).map(|(x, y)| x - y * &q).collect();
                if dot(&cand, &cand) < dot(&basis[i], &basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
    }
    basis.sort_by(|a, b| dot(a, a).cmp(&dot(b, b)).then_with(|| a.cmp(b)));
}

fn normalize_sign(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// Restrict the lattice spanned by `basis` to vectors `k` with `t . k = 0 (mod modulus)`.
fn intersect_congruence(basis: Vec<Vec<BigInt>>, t: &[BigInt], modulus: u64) -> Vec<Vec<BigInt>> {
    if modulus == 1 || basis.is_empty() {
        return basis;
    }
    let m = BigInt::from(modulus);
    let s: Vec<BigInt> = basis.iter().map(|b| dot(t, b).mod_floor(&m)).collect();
    if s.iter().all(|x| x.is_zero()) {
        return basis;
    }
    let r = basis.len();
    let mut row = s;
    row.push(m);
    let ker = integer_kernel(&[row], r + 1);
    let n = basis[0].len();
    let mut out: Vec<Vec<BigInt>> = ker
        .iter()
        .map(|y| {
            (0..n)
                .map(|i| (0..r).map(|j| &y[j] * &basis[j][i]).sum())
                .collect()
        })
        .collect();
    size_reduce(&mut out);
    for v in &mut out {
        normalize_sign(v);
    }
    out
}

/// Prime-exponent vectors of scalars over a shared prime list, plus root-of-unity data.
#[derive(Clone, Debug)]
pub struct FactoredScalars {
    pub primes: Vec<BigUint>,
    /// `exps[i][p]` = exponent of `primes[p]` in the rational part of value `i`.
    pub exps: Vec<Vec<BigInt>>,
    /// common conductor of all root-of-unity parts
    pub conductor: u64,
    /// exponent of zeta_conductor in value `i`
    pub turns: Vec<u64>,
}

impl FactoredScalars {
    pub fn new(values: &[MonomialScalar], trial_limit: u64) -> Result<Self> {
        let mut maps = Vec::with_capacity(values.len());
        let mut primes: BTreeMap<BigUint, usize> = BTreeMap::new();
        for v in values {
            let f = factor_rational(v.modulus(), trial_limit)?;
            for p in f.keys() {
                let len = primes.len();
                primes.entry(p.clone()).or_insert(len);
            }
            maps.push(f);
        }
        let primes: Vec<BigUint> = primes.into_keys().collect();
        let exps = maps
            .iter()
            .map(|m| {
                primes
                    .iter()
                    .map(|p| BigInt::from(m.get(p).copied().unwrap_or(0)))
                    .collect()
            })
            .collect();
        let conductor = values.iter().fold(1, |acc, v| lcm_u64(acc, v.conductor()));
        let turns = values
            .iter()
            .map(|v| v.zeta_exp_in(conductor))
            .collect::<Result<Vec<_>>>()?;
        Ok(FactoredScalars { primes, exps, conductor, turns })
    }
}

/// Relations holding simultaneously in every coordinate of tuple-valued inputs.
///
/// `tuples[t][c]` is coordinate `c` of the `t`-th value; returns relations on `t`.
pub fn tuple_relations(tuples: &[Vec<MonomialScalar>], trial_limit: u64) -> Result<RelationLattice> {
    let n = tuples.len();
    let width = tuples.first().map_or(0, |t| t.len());
    if tuples.iter().any(|t| t.len() != width) {
        return Err(Error::domain("tuples must have equal length"));
    }
    let mut rows: Vec<Vec<BigInt>> = vec![];
    let mut congruences = vec![];
    for c in 0..width {
        let column: Vec<MonomialScalar> = tuples.iter().map(|t| t[c].clone()).collect();
        let f = FactoredScalars::new(&column, trial_limit)?;
        for p in 0..f.primes.len() {
            rows.push((0..n).map(|i| f.exps[i][p].clone()).collect());
        }
        let t: Vec<BigInt> = f.turns.iter().map(|&x| BigInt::from(x)).collect();
        congruences.push((t, f.conductor));
    }
    let mut basis = integer_kernel(&rows, n);
    for (t, m) in &congruences {
        basis = intersect_congruence(basis, t, *m);
    }
    Ok(RelationLattice { dimension: n, basis })
}

/// Lattice `{k : prod values_i^k_i = 1}`.
pub fn multiplicative_relations(values: &[MonomialScalar]) -> Result<RelationLattice> {
    let tuples: Vec<Vec<MonomialScalar>> = values.iter().map(|v| vec![v.clone()]).collect();
    tuple_relations(&tuples, DEFAULT_TRIAL_LIMIT)
}

/// Evaluate `prod values_i^k_i` exactly.
pub fn apply_relation(values: &[MonomialScalar], k: &[BigInt]) -> MonomialScalar {
    values
        .iter()
        .zip(k)
        .fold(MonomialScalar::one(), |acc, (v, e)| acc.mul(&v.pow(e)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    /// a nonzero relation, re-verified exactly, when dependent
    #[serde(serialize_with = "crate::serde_big::ser_opt_bigint_vec")]
    pub certificate: Option<Vec<BigInt>>,
    pub lattice: RelationLattice,
}

pub fn is_multiplicatively_independent(values: &[MonomialScalar]) -> Result<IndependenceReport> {
    let lattice = multiplicative_relations(values)?;
    let certificate = lattice.basis.first().cloned();
    if let Some(k) = &certificate {
        if !apply_relation(values, k).is_one() {
            return Err(Error::Internal(format!("relation {k:?} failed exact verification")));
        }
    }
    Ok(IndependenceReport { independent: certificate.is_none(), certificate, lattice })
}

/// Order of `u / v` when it is a root of unity.
pub fn ratio_order(u: &MonomialScalar, v: &MonomialScalar) -> Option<u64> {
    u.div(v).order()
}

/// Order of the group generated by all root-of-unity ratios among `values`.
pub fn group_order_d(values: &[MonomialScalar]) -> u64 {
    let mut d = 1;
    for (i, u) in values.iter().enumerate() {
        for v in &values[i + 1..] {
            if let Some(o) = ratio_order(u, v) {
                d = lcm_u64(d, o);
            }
        }
    }
    d
}
