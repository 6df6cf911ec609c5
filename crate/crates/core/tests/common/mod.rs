#![allow(dead_code)]

use num_bigint::BigUint;
use orbitlab::cyclo::{CyclotomicNumber, MonomialScalar};
use orbitlab::dynamics::{Hypersurface, MonomialMap, Term};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }

    pub fn coin(&mut self) -> bool {
        self.below(2) == 0
    }
}

pub const POINT_POOL: &[&str] =
    &["1", "-1", "2", "3", "-2", "1/2", "3/4", "6", "zeta(3)", "zeta(4)^3", "2 * zeta(6)", "-1/3"];

pub const COEFF_POOL: &[i64] = &[1, -1, 2, -2, 3, -3, 5];

pub fn scalar(s: &str) -> MonomialScalar {
    s.parse().unwrap()
}

pub fn scalars(xs: &[&str]) -> Vec<MonomialScalar> {
    xs.iter().map(|s| scalar(s)).collect()
}

pub fn int_scalars(xs: &[i64]) -> Vec<MonomialScalar> {
    xs.iter().map(|&x| MonomialScalar::from_int(x).unwrap()).collect()
}

pub fn ints(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

pub fn random_map(rng: &mut Rng, m: usize, max_entry: u64) -> MonomialMap {
    let rows = (0..m).map(|_| (0..m).map(|_| BigUint::from(rng.below(max_entry + 1))).collect()).collect();
    MonomialMap::new(rows).unwrap()
}

pub fn random_point(rng: &mut Rng, m: usize) -> Vec<MonomialScalar> {
    (0..m).map(|_| scalar(rng.pick(POINT_POOL))).collect()
}

/// Hypersurface with `terms` non-constant monomials of degree at most 2 in each variable.
pub fn random_nonconstant_terms(rng: &mut Rng, m: usize, terms: usize) -> Vec<Term> {
    let terms = terms.min(3usize.pow(m as u32) - 1);
    let mut out: Vec<Term> = vec![];
    while out.len() < terms {
        let exps: Vec<u64> = (0..m).map(|_| rng.below(3)).collect();
        if exps.iter().all(|&e| e == 0) || out.iter().any(|t| t.exps == ints(&exps)) {
            continue;
        }
        let c = if rng.below(6) == 0 {
            CyclotomicNumber::zeta_pow(3, 1)
        } else {
            CyclotomicNumber::from_int(*rng.pick(COEFF_POOL))
        };
        out.push(Term::new(c, ints(&exps)));
    }
    out
}

/// Orbit point by repeated substitution, one step at a time.
pub fn iterate(map: &MonomialMap, w: &[MonomialScalar], n: u64) -> Vec<MonomialScalar> {
    let mut p = w.to_vec();
    for _ in 0..n {
        p = map.apply(&p);
    }
    p
}

/// Random instance of bounded size, planting a zero at a small step half the time.
pub fn random_instance(rng: &mut Rng) -> (MonomialMap, Hypersurface, Vec<MonomialScalar>) {
    let m = rng.range(1, 3) as usize;
    let map = random_map(rng, m, 2);
    let w = random_point(rng, m);
    let n_terms = rng.range(1, 4) as usize;
    let plant = rng.coin() && n_terms >= 2;
    let mut terms = random_nonconstant_terms(rng, m, if plant { n_terms - 1 } else { n_terms });
    if plant {
        let at = iterate(&map, &w, rng.below(3));
        let v = Hypersurface::new(m, terms.clone()).unwrap().eval_at(&at);
        if !v.is_zero() {
            terms.push(Term::new(v.neg(), vec![BigUint::from(0u8); m]));
        }
    } else if rng.below(3) == 0 {
        terms.push(Term::new(CyclotomicNumber::from_int(*rng.pick(COEFF_POOL)), vec![BigUint::from(0u8); m]));
    }
    (map.clone(), Hypersurface::new(m, terms).unwrap(), w)
}
