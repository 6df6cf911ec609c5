//! Box enumeration of unit-equation solutions inside a finitely generated group.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::partitions::MAX_ARITY;
use crate::cyclo::factor::DEFAULT_TRIAL_LIMIT;
use crate::cyclo::relations::tuple_relations;
use crate::cyclo::{CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Subgroup of `(K^*)^k` generated by `r` tuples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgroupGamma {
    generators: Vec<Vec<MonomialScalar>>,
    rank: usize,
}

impl SubgroupGamma {
    pub fn new(generators: Vec<Vec<MonomialScalar>>) -> Result<Self> {
        let k = generators.first().map_or(0, Vec::len);
        if generators.is_empty() || k == 0 {
            return Err(Error::domain("need at least one generator of positive arity"));
        }
        if let Some(i) = generators.iter().position(|g| g.len() != k) {
            return Err(Error::domain(format!("generator {} has arity {}, expected {k}", i + 1, generators[i].len())));
        }
        let lattice = tuple_relations(&generators, DEFAULT_TRIAL_LIMIT)?;
        let rank = generators.len() - lattice.rank();
        Ok(SubgroupGamma { generators, rank })
    }

    pub fn arity(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generators(&self) -> &[Vec<MonomialScalar>] {
        &self.generators
    }

    /// Free rank of the group.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `prod_t g_t^e_t`
    pub fn element(&self, e: &[i64]) -> Vec<MonomialScalar> {
        (0..self.arity())
            .map(|i| {
                self.generators
                    .iter()
                    .zip(e)
                    .fold(MonomialScalar::one(), |acc, (g, &x)| acc.mul(&g[i].pow(&BigInt::from(x))))
            })
            .collect()
    }
}

/// Problem file payload: `{"coeffs": [...], "generators": [[...]], "box": B}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitInstance {
    pub coeffs: Vec<CyclotomicNumber>,
    pub generators: Vec<Vec<MonomialScalar>>,
    #[serde(rename = "box")]
    pub box_radius: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitSolution {
    pub exponents: Vec<i64>,
    pub x: Vec<MonomialScalar>,
    pub nondegenerate: bool,
}

fn term_values(a: &[CyclotomicNumber], x: &[MonomialScalar]) -> Vec<CyclotomicNumber> {
    a.iter().zip(x).map(|(c, v)| c.mul(&v.to_cyclotomic())).collect()
}

/// Subset `mask` of the terms sums to zero.
pub(crate) fn subsum_vanishes(terms: &[CyclotomicNumber], mask: u32) -> bool {
    terms
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(CyclotomicNumber::zero(), |acc, (_, t)| acc.add(t))
        .is_zero()
}

/// No proper nonempty subsum vanishes.
pub fn is_nondegenerate(a: &[CyclotomicNumber], x: &[MonomialScalar]) -> bool {
    let t = term_values(a, x);
    let full = (1u32 << t.len()) - 1;
    (1..full).all(|mask| !subsum_vanishes(&t, mask))
}

pub fn is_solution(a: &[CyclotomicNumber], x: &[MonomialScalar]) -> bool {
    term_values(a, x).iter().fold(CyclotomicNumber::zero(), |acc, t| acc.add(t)).is_zero()
}

/// All solutions with exponents in `[-B, B]^r`, in lexicographic exponent order.
pub fn enumerate_solutions(
    a: &[CyclotomicNumber],
    gamma: &SubgroupGamma,
    b: u64,
    budget: u64,
) -> Result<Vec<UnitSolution>> {
    let k = gamma.arity();
    if a.len() != k {
        return Err(Error::domain(format!("{} coefficients for a group of arity {k}", a.len())));
    }
    if let Some(i) = a.iter().position(CyclotomicNumber::is_zero) {
        return Err(Error::domain(format!("coefficient a_{} is zero", i + 1)));
    }
    if k > MAX_ARITY {
        return Err(Error::Resource(format!("arity {k} exceeds the configured maximum {MAX_ARITY}")));
    }
    let r = gamma.generators().len();
    let side = 2 * b + 1;
    let cost = (k as f64 * side as f64).powi(r as i32);
    if cost > budget as f64 {
        return Err(Error::Resource(format!(
            "enumeration cost k^r (2B+1)^r = {cost:.3e} exceeds the budget {budget}"
        )));
    }
    let bi = i64::try_from(b).map_err(|_| Error::Resource("box too large".into()))?;
    // powers[t][i][e + B] = g_t[i]^e
    let powers: Vec<Vec<Vec<MonomialScalar>>> = gamma
        .generators()
        .iter()
        .map(|g| g.iter().map(|v| (-bi..=bi).map(|e| v.pow(&BigInt::from(e))).collect()).collect())
        .collect();
    let firsts: Vec<i64> = (-bi..=bi).collect();
    let chunks = crate::par::map(&firsts, |&e0| {
        let mut found = vec![];
        let mut e = vec![-bi; r];
        e[0] = e0;
        loop {
            let x: Vec<MonomialScalar> = (0..k)
                .map(|i| {
                    (0..r).fold(MonomialScalar::one(), |acc, t| acc.mul(&powers[t][i][(e[t] + bi) as usize]))
                })
                .collect();
            if is_solution(a, &x) {
                let nondegenerate = is_nondegenerate(a, &x);
                found.push(UnitSolution { exponents: e.clone(), x, nondegenerate });
            }
            // odometer over coordinates 1..r
            let mut t = r;
            loop {
                t -= 1;
                if t == 0 {
                    return found;
                }
                if e[t] < bi {
                    e[t] += 1;
                    break;
                }
                e[t] = -bi;
            }
        }
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// Solutions equal up to a common factor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProportionalityClass {
    /// the tuple divided by its first coordinate
    pub representative: Vec<MonomialScalar>,
    /// indices into the solution list
    pub members: Vec<usize>,
}

pub fn normalize(x: &[MonomialScalar]) -> Vec<MonomialScalar> {
    match x.first() {
        Some(x0) => x.iter().map(|v| v.div(x0)).collect(),
        None => vec![],
    }
}

pub fn proportionality_classes(solutions: &[UnitSolution]) -> Vec<ProportionalityClass> {
    let mut classes: Vec<ProportionalityClass> = vec![];
    let mut index = std::collections::HashMap::new();
    for (i, s) in solutions.iter().enumerate() {
        let rep = normalize(&s.x);
        match index.get(&rep) {
            Some(&c) => {
                let cls: &mut ProportionalityClass = &mut classes[c];
                cls.members.push(i);
            }
            None => {
                index.insert(rep.clone(), classes.len());
                classes.push(ProportionalityClass { representative: rep, members: vec![i] });
            }
        }
    }
    classes
}
