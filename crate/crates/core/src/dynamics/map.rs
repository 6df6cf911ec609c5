//! Monomial maps, sparse hypersurfaces and orbit points.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};
use crate::serde_big::{json_to_biguint, ubig_to_json};

pub type Matrix = Vec<Vec<BigUint>>;

pub fn identity(m: usize) -> Matrix {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigUint::zero(); cols]; m];
    for i in 0..m {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Row vector times matrix.
pub fn vec_mat(v: &[BigUint], a: &Matrix) -> Vec<BigUint> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = vec![BigUint::zero(); cols];
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..cols {
            if !a[k][j].is_zero() {
                out[j] += x * &a[k][j];
            }
        }
    }
    out
}

/// Largest bit length among the entries.
pub fn max_bits(a: &Matrix) -> u64 {
    a.iter().flatten().map(|x| x.bits()).max().unwrap_or(0)
}

/// Monomial self-map of affine m-space; row `i` holds the exponents of `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    exponents: Matrix,
}

impl MonomialMap {
    pub fn new(exponents: Matrix) -> Result<Self> {
        let m = exponents.len();
        if m == 0 {
            return Err(Error::domain("map dimension must be at least 1"));
        }
        if exponents.iter().any(|r| r.len() != m) {
            return Err(Error::domain(format!("exponent matrix must be {m}x{m}")));
        }
        Ok(MonomialMap { exponents })
    }

    pub fn from_u64(rows: &[&[u64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigUint::from(x)).collect()).collect())
    }

    /// `(X_1^d, ..., X_m^d)`
    pub fn power(m: usize, d: u64) -> Self {
        let mut e = vec![vec![BigUint::zero(); m]; m];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = BigUint::from(d);
        }
        MonomialMap { exponents: e }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &Matrix {
        &self.exponents
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.exponents[i][j]
    }

    /// `deg F_i`
    pub fn row_degree(&self, i: usize) -> BigUint {
        self.exponents[i].iter().sum()
    }

    /// Exponent matrix of the n-th iterate.
    pub fn compose_power(&self, mut n: u64) -> Matrix {
        let mut result = identity(self.dim());
        let mut base = self.exponents.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = mat_mul(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = mat_mul(&base, &base);
            }
        }
        result
    }

    /// Diagonal entries when the matrix is diagonal.
    pub fn diagonal(&self) -> Option<Vec<BigUint>> {
        let m = self.dim();
        for i in 0..m {
            for j in 0..m {
                if i != j && !self.exponents[i][j].is_zero() {
                    return None;
                }
            }
        }
        Some((0..m).map(|i| self.exponents[i][i].clone()).collect())
    }

    /// Common exponent `d` when the map is `(X_1^d, ..., X_m^d)`.
    pub fn power_degree(&self) -> Option<BigUint> {
        let diag = self.diagonal()?;
        diag.iter().all(|d| d == &diag[0]).then(|| diag[0].clone())
    }

    /// Block-diagonal product map acting on `2m` (or `m + m'`) variables.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut e = vec![vec![BigUint::zero(); a + b]; a + b];
        for i in 0..a {
            e[i][..a].clone_from_slice(&self.exponents[i]);
        }
        for i in 0..b {
            e[a + i][a..].clone_from_slice(&other.exponents[i]);
        }
        MonomialMap { exponents: e }
    }

    /// Apply the map once to a point by substitution.
    pub fn apply(&self, w: &[MonomialScalar]) -> Vec<MonomialScalar> {
        self.exponents
            .iter()
            .map(|row| {
                row.iter().zip(w).fold(MonomialScalar::one(), |acc, (e, x)| acc.mul(&x.pow_u(e)))
            })
            .collect()
    }
}

impl Serialize for MonomialMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_big::ser_biguint_matrix(&self.exponents, s)
    }
}

impl<'de> Deserialize<'de> for MonomialMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        let m = rows
            .iter()
            .map(|r| r.iter().map(|v| parse_exp(v).map_err(D::Error::custom)).collect())
            .collect::<std::result::Result<Matrix, _>>()?;
        MonomialMap::new(m).map_err(D::Error::custom)
    }
}

fn parse_exp(v: &serde_json::Value) -> Result<BigUint> {
    json_to_biguint(v).ok_or_else(|| Error::domain(format!("expected a non-negative integer, got {v}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: CyclotomicNumber,
    #[serde(serialize_with = "ser_exps", deserialize_with = "de_exps")]
    pub exps: Vec<BigUint>,
}

fn ser_exps<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ubig_to_json).collect::<Vec<_>>().serialize(s)
}

fn de_exps<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
    use serde::de::Error as _;
    Vec::<serde_json::Value>::deserialize(d)?
        .iter()
        .map(|v| parse_exp(v).map_err(D::Error::custom))
        .collect()
}

impl Term {
    pub fn new(coeff: CyclotomicNumber, exps: Vec<BigUint>) -> Self {
        Term { coeff, exps }
    }

    pub fn from_ints(coeff: i64, exps: &[u64]) -> Self {
        Term::new(CyclotomicNumber::from_int(coeff), exps.iter().map(|&e| BigUint::from(e)).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|e| e.is_zero())
    }

    pub fn degree(&self) -> BigUint {
        self.exps.iter().sum()
    }

    /// `(variable, exponent)` when the term is `c X_j^e` with `e >= 1`.
    pub fn pure_power(&self) -> Option<(usize, BigUint)> {
        let mut nz = self.exps.iter().enumerate().filter(|(_, e)| !e.is_zero());
        let (j, e) = nz.next()?;
        nz.next().is_none().then(|| (j, e.clone()))
    }
}

/// Hypersurface `G = 0` with `G` given by its nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Hypersurface {
    terms: Vec<Term>,
}

impl Hypersurface {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("hypersurface polynomial must have at least one term"));
        }
        let mut seen = BTreeSet::new();
        for (i, t) in terms.iter().enumerate() {
            if t.exps.len() != dim {
                return Err(Error::domain(format!(
                    "term {i} has {} exponents, expected {dim}",
                    t.exps.len()
                )));
            }
            if t.coeff.is_zero() {
                return Err(Error::domain(format!("term {i} has zero coefficient")));
            }
            if !seen.insert(t.exps.clone()) {
                return Err(Error::domain(format!("term {i} repeats an exponent vector")));
            }
        }
        Ok(Hypersurface { terms })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].exps.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of monomials of `G`.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Option<&CyclotomicNumber> {
        self.terms.iter().find(|t| t.is_constant()).map(|t| &t.coeff)
    }

    pub fn degree(&self) -> BigUint {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or_default()
    }

    /// Evaluate at a materialized point.
    pub fn eval_at(&self, point: &[MonomialScalar]) -> CyclotomicNumber {
        self.terms.iter().fold(CyclotomicNumber::zero(), |acc, t| {
            let mono = t
                .exps
                .iter()
                .zip(point)
                .fold(MonomialScalar::one(), |m, (e, x)| m.mul(&x.pow_u(e)));
            acc.add(&t.coeff.mul(&mono.to_cyclotomic()))
        })
    }
}

impl<'de> Deserialize<'de> for Hypersurface {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<Term>::deserialize(d)?;
        let dim = terms.first().map_or(0, |t| t.exps.len());
        Hypersurface::new(dim, terms).map_err(D::Error::custom)
    }
}

/// `Phi^(n)(w)` kept as the exponent matrix `S^n` applied to `w`.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub base: Vec<MonomialScalar>,
    pub step: u64,
    pub matrix: Matrix,
}

impl OrbitPoint {
    /// Coordinate `i`, materialized.
    pub fn coordinate(&self, i: usize) -> MonomialScalar {
        self.matrix[i]
            .iter()
            .zip(&self.base)
            .fold(MonomialScalar::one(), |acc, (e, w)| acc.mul(&w.pow_u(e)))
    }

    pub fn coordinates(&self) -> Vec<MonomialScalar> {
        (0..self.base.len()).map(|i| self.coordinate(i)).collect()
    }

    /// Exponents of the base coordinates in the monomial `X^exps` evaluated here.
    pub fn monomial_exponents(&self, exps: &[BigUint]) -> Vec<BigUint> {
        vec_mat(exps, &self.matrix)
    }
}

pub fn orbit_point(map: &MonomialMap, w: &[MonomialScalar], n: u64) -> Result<OrbitPoint> {
    if w.len() != map.dim() {
        return Err(Error::domain(format!("point has {} coordinates, map has dimension {}", w.len(), map.dim())));
    }
    Ok(OrbitPoint { base: w.to_vec(), step: n, matrix: map.compose_power(n) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(m: &Matrix) -> Vec<Vec<u64>> {
        m.iter().map(|r| r.iter().map(|x| x.try_into().unwrap()).collect()).collect()
    }

    #[test]
    fn compose_power_examples() {
        let d = MonomialMap::from_u64(&[&[2, 0], &[0, 3]]).unwrap();
        assert_eq!(ints(&d.compose_power(4)), vec![vec![16, 0], vec![0, 81]]);
        let t = MonomialMap::from_u64(&[&[2, 1], &[0, 3]]).unwrap();
        assert_eq!(ints(&t.compose_power(2)), vec![vec![4, 5], vec![0, 9]]);
        assert_eq!(t.compose_power(0), identity(2));
    }

    #[test]
    fn orbit_point_examples() {
        let w: Vec<MonomialScalar> = vec!["2".parse().unwrap(), "3".parse().unwrap()];
        let t = MonomialMap::from_u64(&[&[2, 1], &[0, 3]]).unwrap();
        let p = orbit_point(&t, &w, 2).unwrap();
        let c: Vec<String> = p.coordinates().iter().map(|x| x.to_string()).collect();
        assert_eq!(c, vec!["3888", "19683"]);
        assert_eq!(orbit_point(&t, &w, 0).unwrap().coordinates(), w);
    }

    #[test]
    fn hypersurface_validation() {
        assert!(Hypersurface::new(2, vec![]).is_err());
        assert!(Hypersurface::new(2, vec![Term::from_ints(1, &[1, 0]), Term::from_ints(2, &[1, 0])]).is_err());
        assert!(Hypersurface::new(2, vec![Term::from_ints(0, &[1, 0])]).is_err());
        let g: Hypersurface =
            serde_json::from_str(r#"[{"coeff":"1","exps":[1,0]},{"coeff":"-12","exps":[0,0]}]"#).unwrap();
        assert_eq!(g.n_terms(), 2);
        assert_eq!(g.constant_term(), Some(&CyclotomicNumber::from_int(-12)));
    }
}
