//! Set partitions of `{1, ..., k}` by restricted growth strings.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 12;

/// Blocks of 0-based indices, each sorted, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let k: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; k];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::domain("empty block"));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= k || seen[i] {
                    return Err(Error::domain("blocks must partition 0..k"));
                }
                seen[i] = true;
            }
        }
        blocks.sort();
        Ok(SetPartition { blocks })
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let nb = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![vec![]; nb];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn arity(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Every block has at least two elements.
    pub fn is_suitable(&self) -> bool {
        self.blocks.iter().all(|b| b.len() >= 2)
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        self.blocks.iter().all(|b| other.blocks.iter().any(|o| b.iter().all(|i| o.contains(i))))
    }

    pub fn is_proper_refinement_of(&self, other: &SetPartition) -> bool {
        self != other && self.refines(other)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", parts.join(" | "))
    }
}

impl Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
        one_based.serialize(s)
    }
}

fn check_arity(k: usize) -> Result<()> {
    if k > MAX_ARITY {
        return Err(Error::Resource(format!("arity {k} exceeds the configured maximum {MAX_ARITY}")));
    }
    Ok(())
}

/// All set partitions of `{0, ..., k-1}`.
pub fn all_partitions(k: usize) -> Result<Vec<SetPartition>> {
    check_arity(k)?;
    if k == 0 {
        return Ok(vec![SetPartition { blocks: vec![] }]);
    }
    let mut out = vec![];
    let mut rgs = vec![0usize; k];
    // max_prefix[i] = max(rgs[0..i])
    loop {
        out.push(SetPartition::from_rgs(&rgs));
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            let bound = rgs[..i].iter().max().copied().unwrap_or(0) + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Partitions with every block of size at least 2.
pub fn suitable_partitions(k: usize) -> Result<Vec<SetPartition>> {
    if k < 2 {
        return Err(Error::domain(format!("suitable partitions need k >= 2, got {k}")));
    }
    Ok(all_partitions(k)?.into_iter().filter(SetPartition::is_suitable).collect())
}
