//! Weak proportionality and the bound ledger for unit equations.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::partitions::{suitable_partitions, SetPartition};
use super::solve::{
    enumerate_solutions, proportionality_classes, subsum_vanishes, ProportionalityClass, SubgroupGamma,
    UnitInstance, UnitSolution, DEFAULT_BUDGET,
};
use crate::bounds::{BoundCheck, BoundParams, FormulaId};
use crate::cyclo::{CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionCount {
    pub partition: SetPartition,
    /// solutions whose finest vanishing partition is this one
    pub solutions: usize,
    /// those solutions up to block-wise proportionality
    pub classes: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WeakProportionalityReport {
    /// per solution, the suitable partitions whose blocks all vanish
    pub compatible: Vec<Vec<SetPartition>>,
    /// classes of the transitive closure, as solution indices
    pub closure_classes: Vec<Vec<usize>>,
    pub per_partition: Vec<PartitionCount>,
    /// sum over partitions of the per-partition class counts
    pub per_partition_total: usize,
}

/// Each block normalized by its first coordinate.
fn blockwise_key(p: &SetPartition, x: &[MonomialScalar]) -> Vec<MonomialScalar> {
    p.blocks().iter().flat_map(|b| b.iter().map(|&i| x[i].div(&x[b[0]]))).collect()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

pub fn weak_proportionality_classes(
    solutions: &[UnitSolution],
    a: &[CyclotomicNumber],
) -> Result<WeakProportionalityReport> {
    if solutions.is_empty() {
        return Ok(WeakProportionalityReport::default());
    }
    let k = a.len();
    let partitions = suitable_partitions(k)?;
    let compatible_idx: Vec<Vec<usize>> = solutions
        .iter()
        .map(|s| {
            let terms: Vec<CyclotomicNumber> = a.iter().zip(&s.x).map(|(c, v)| c.mul(&v.to_cyclotomic())).collect();
            (0..partitions.len())
                .filter(|&p| {
                    partitions[p].blocks().iter().all(|b| subsum_vanishes(&terms, b.iter().fold(0, |m, &i| m | 1 << i)))
                })
                .collect()
        })
        .collect();
    let mut parent: Vec<usize> = (0..solutions.len()).collect();
    let mut per: BTreeMap<usize, (usize, HashMap<Vec<MonomialScalar>, ()>)> = BTreeMap::new();
    for (p, part) in partitions.iter().enumerate() {
        let mut first_with_key: HashMap<Vec<MonomialScalar>, usize> = HashMap::new();
        for (i, s) in solutions.iter().enumerate() {
            if !compatible_idx[i].contains(&p) {
                continue;
            }
            let key = blockwise_key(part, &s.x);
            match first_with_key.get(&key) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
                None => {
                    first_with_key.insert(key.clone(), i);
                }
            }
            let finest = !compatible_idx[i].iter().any(|&q| partitions[q].is_proper_refinement_of(part));
            if finest {
                let e = per.entry(p).or_default();
                e.0 += 1;
                e.1.insert(key, ());
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..solutions.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let per_partition: Vec<PartitionCount> = per
        .into_iter()
        .map(|(p, (n, keys))| PartitionCount { partition: partitions[p].clone(), solutions: n, classes: keys.len() })
        .collect();
    let per_partition_total = per_partition.iter().map(|c| c.classes).sum();
    Ok(WeakProportionalityReport {
        compatible: compatible_idx.iter().map(|v| v.iter().map(|&p| partitions[p].clone()).collect()).collect(),
        closure_classes: groups.into_values().collect(),
        per_partition,
        per_partition_total,
    })
}

/// Class counts against the non-degenerate and weak-proportionality bounds.
pub fn compare_with_bounds(
    nondegenerate_classes: u64,
    weak: &WeakProportionalityReport,
    k: usize,
    r: usize,
) -> Result<Vec<BoundCheck>> {
    let p = BoundParams::default().with("k", k as u64).with("r", r as u64);
    Ok(vec![
        BoundCheck::new("nondegenerate-classes", nondegenerate_classes, FormulaId::L26, &p)?,
        BoundCheck::new("weak-closure-classes", weak.closure_classes.len() as u64, FormulaId::C27, &p)?,
        BoundCheck::new("weak-per-partition-classes", weak.per_partition_total as u64, FormulaId::C27, &p)?,
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitReport {
    pub k: usize,
    pub rank: usize,
    #[serde(rename = "box")]
    pub box_radius: u64,
    pub solutions: Vec<UnitSolution>,
    pub classes: Vec<ProportionalityClass>,
    pub nondegenerate_classes: usize,
    pub weak: WeakProportionalityReport,
    pub bounds: Vec<BoundCheck>,
}

pub fn solve_units(inst: &UnitInstance, budget: Option<u64>) -> Result<UnitReport> {
    let gamma = SubgroupGamma::new(inst.generators.clone())?;
    if inst.coeffs.len() < 2 {
        return Err(Error::domain("a unit equation needs at least two terms"));
    }
    let solutions = enumerate_solutions(&inst.coeffs, &gamma, inst.box_radius, budget.unwrap_or(DEFAULT_BUDGET))?;
    let classes = proportionality_classes(&solutions);
    let nondegenerate_classes = classes.iter().filter(|c| solutions[c.members[0]].nondegenerate).count();
    let weak = weak_proportionality_classes(&solutions, &inst.coeffs)?;
    let bounds = compare_with_bounds(nondegenerate_classes as u64, &weak, gamma.arity(), gamma.rank())?;
    Ok(UnitReport {
        k: gamma.arity(),
        rank: gamma.rank(),
        box_radius: inst.box_radius,
        solutions,
        classes,
        nondegenerate_classes,
        weak,
        bounds,
    })
}
