//! Steps where two orbits of the same dimension coincide.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::eval::FactoredPoint;
use super::intersect::{intersection_set, IntersectionReport, ScanConfig};
use super::map::{mat_mul, Hypersurface, MonomialMap, Term};
use crate::cyclo::{CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SyncReport {
    pub members: Vec<u64>,
    pub n_max: u64,
    /// product-system intersection set, which contains `members`
    pub superset: IntersectionReport,
    pub within_superset: bool,
}

/// `G = sum_i (X_i - Y_i)` on `2m` variables.
pub fn difference_hypersurface(m: usize) -> Hypersurface {
    let unit = |k: usize| (0..2 * m).map(|j| BigUint::from(u8::from(j == k))).collect::<Vec<_>>();
    let mut terms = vec![];
    for i in 0..m {
        terms.push(Term::new(CyclotomicNumber::one(), unit(i)));
        terms.push(Term::new(CyclotomicNumber::from_int(-1), unit(m + i)));
    }
    Hypersurface::new(2 * m, terms).expect("distinct unit exponents")
}

pub fn synchronized_intersection(
    f: &MonomialMap,
    h: &MonomialMap,
    w1: &[MonomialScalar],
    w2: &[MonomialScalar],
    cfg: &ScanConfig,
) -> Result<SyncReport> {
    let m = f.dim();
    if h.dim() != m || w1.len() != m || w2.len() != m {
        return Err(Error::domain(format!(
            "dimension mismatch: maps {} and {}, points {} and {}",
            m,
            h.dim(),
            w1.len(),
            w2.len()
        )));
    }
    let joint: Vec<MonomialScalar> = w1.iter().chain(w2).cloned().collect();
    let fp = FactoredPoint::new(&joint, &cfg.exact)?;
    let mut fn_ = f.compose_power(0);
    let mut hn = h.compose_power(0);
    let mut members = vec![];
    for n in 0..=cfg.n_max {
        if n > 0 {
            fn_ = mat_mul(&fn_, f.exponents());
            hn = mat_mul(&hn, h.exponents());
        }
        let equal = (0..m).all(|i| {
            let mut left = fn_[i].clone();
            left.resize(2 * m, BigUint::zero());
            let mut right = vec![BigUint::zero(); m];
            right.extend(hn[i].iter().cloned());
            fp.monomial(&left) == fp.monomial(&right)
        });
        if equal {
            members.push(n);
        }
    }
    let superset = intersection_set(&f.product(h), &difference_hypersurface(m), &joint, cfg)?;
    let sup = superset.member_steps();
    let within_superset = members.iter().all(|n| sup.contains(n));
    Ok(SyncReport { members, n_max: cfg.n_max, superset, within_superset })
}
