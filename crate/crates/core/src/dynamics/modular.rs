//! Multi-modular screening: evaluate `G(Phi^(n)(w))` modulo word-size primes `p = 1 mod N`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::map::{Hypersurface, MonomialMap};
use crate::cyclo::factor::{is_prime_u64, mul_mod, pow_mod};
use crate::cyclo::field::{lcm_u64, prime_divisors};
use crate::cyclo::{CyclotomicNumber, MonomialScalar};
use crate::error::{Error, Result};

pub const DEFAULT_PRIME_COUNT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Nonzero,
    ZeroCandidate,
}

/// Everything a modular evaluation needs to know about the data.
#[derive(Clone, Debug)]
pub struct ModularData {
    pub conductor: u64,
    /// numerators and denominators that a prime must not divide
    pub avoid: Vec<BigUint>,
}

impl ModularData {
    pub fn new(g: &Hypersurface, w: &[MonomialScalar]) -> Self {
        let mut conductor = 1;
        let mut avoid = vec![];
        for x in w {
            conductor = lcm_u64(conductor, x.conductor());
            avoid.push(x.modulus().numer().magnitude().clone());
            avoid.push(x.modulus().denom().magnitude().clone());
        }
        for t in g.terms() {
            conductor = lcm_u64(conductor, t.coeff.conductor());
            for c in t.coeff.coeffs() {
                avoid.push(c.denom().magnitude().clone());
            }
        }
        avoid.retain(|x| x > &BigUint::from(1u32));
        avoid.sort();
        avoid.dedup();
        ModularData { conductor, avoid }
    }
}

/// A prime `p = 1 mod N` with a fixed image of `zeta_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModPrime {
    pub p: u64,
    #[serde(skip)]
    pub zeta: u64,
    #[serde(skip)]
    pub conductor: u64,
}

impl ModPrime {
    pub fn new(p: u64, data: &ModularData) -> Result<Self> {
        let n = data.conductor;
        if p < 3 || !is_prime_u64(p) {
            return Err(Error::Config(format!("{p} is not an odd prime")));
        }
        if !(p - 1).is_multiple_of(n) {
            return Err(Error::Config(format!("prime {p} is not 1 mod {n}")));
        }
        let pb = BigUint::from(p);
        if data.avoid.iter().any(|x| (x % &pb).is_zero()) {
            return Err(Error::Config(format!("prime {p} divides an input numerator or denominator")));
        }
        let ells = prime_divisors(n);
        let zeta = (2..p)
            .map(|h| pow_mod(h, (p - 1) / n, p))
            .find(|&z| ells.iter().all(|&l| pow_mod(z, n / l, p) != 1))
            .ok_or_else(|| Error::Internal("no primitive root of unity found".into()))?;
        Ok(ModPrime { p, zeta, conductor: n })
    }

    fn inv(&self, x: u64) -> u64 {
        pow_mod(x, self.p - 2, self.p)
    }

    fn reduce(&self, x: &num_bigint::BigInt) -> u64 {
        let p = num_bigint::BigInt::from(self.p);
        x.mod_floor(&p).to_u64().unwrap()
    }

    fn rational(&self, q: &num_rational::BigRational) -> u64 {
        mul_mod(self.reduce(q.numer()), self.inv(self.reduce(q.denom())), self.p)
    }

    /// Image of `zeta_M^k` for `M | N`.
    fn zeta_pow(&self, m: u64, k: u64) -> u64 {
        pow_mod(self.zeta, (k % m) * (self.conductor / m), self.p)
    }

    pub fn cyclotomic(&self, c: &CyclotomicNumber) -> u64 {
        let m = c.conductor();
        c.coeffs().iter().enumerate().fold(0, |acc, (k, q)| {
            if q.is_zero() {
                return acc;
            }
            let t = mul_mod(self.rational(q), self.zeta_pow(m, k as u64), self.p);
            (acc + t) % self.p
        })
    }

    pub fn scalar(&self, w: &MonomialScalar) -> u64 {
        mul_mod(self.rational(w.modulus()), self.zeta_pow(w.conductor(), w.zeta_exp()), self.p)
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `count` primes of 62 bits, each `1 mod N`; deterministic in `(N, seed)`.
pub fn default_primes(data: &ModularData, count: usize, seed: u64) -> Vec<ModPrime> {
    let n = data.conductor;
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed) ^ n);
    let start = (1u64 << 61) + (rng.next_u64() >> 4);
    let mut p = start - start % n + 1;
    if p < start {
        p += n;
    }
    // keep the candidate odd so that p - 1 stays divisible by N
    if p.is_multiple_of(2) {
        p += n;
    }
    let step = if n.is_multiple_of(2) { n } else { 2 * n };
    let mut out = vec![];
    while out.len() < count {
        if let Ok(mp) = ModPrime::new(p, data) {
            out.push(mp);
        }
        p += step;
    }
    out
}

type ModMatrix = Vec<Vec<u64>>;

fn mat_mul_mod(a: &ModMatrix, b: &ModMatrix, m: u64) -> ModMatrix {
    let k = a.len();
    let mut out = vec![vec![0u64; k]; k];
    for i in 0..k {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..k {
                out[i][j] = ((out[i][j] as u128 + a[i][l] as u128 * b[l][j] as u128) % m as u128) as u64;
            }
        }
    }
    out
}

fn map_mod(map: &MonomialMap, m: u64) -> ModMatrix {
    let mb = BigUint::from(m);
    map.exponents()
        .iter()
        .map(|r| r.iter().map(|x| (x % &mb).to_u64().unwrap()).collect())
        .collect()
}

fn identity_mod(k: usize) -> ModMatrix {
    (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()
}

fn pow_matrix_mod(s: &ModMatrix, mut n: u64, m: u64) -> ModMatrix {
    let mut result = identity_mod(s.len());
    let mut base = s.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = mat_mul_mod(&result, &base, m);
        }
        n >>= 1;
        if n > 0 {
            base = mat_mul_mod(&base, &base, m);
        }
    }
    result
}

/// Per-prime precomputation for one `(G, w)` pair.
struct PrimeEval {
    prime: ModPrime,
    coeffs: Vec<u64>,
    exps: Vec<Vec<u64>>,
    point: Vec<u64>,
}

impl PrimeEval {
    fn new(prime: ModPrime, g: &Hypersurface, w: &[MonomialScalar]) -> Self {
        let order = BigUint::from(prime.p - 1);
        PrimeEval {
            prime,
            coeffs: g.terms().iter().map(|t| prime.cyclotomic(&t.coeff)).collect(),
            exps: g
                .terms()
                .iter()
                .map(|t| t.exps.iter().map(|e| (e % &order).to_u64().unwrap()).collect())
                .collect(),
            point: w.iter().map(|x| prime.scalar(x)).collect(),
        }
    }

    /// `G(Phi^(n)(w)) mod p` given `S^n mod (p - 1)`.
    fn eval(&self, s_n: &ModMatrix) -> u64 {
        let (p, ord) = (self.prime.p, self.prime.p - 1);
        let m = self.point.len();
        let mut acc = 0u64;
        for (c, e) in self.coeffs.iter().zip(&self.exps) {
            let mut term = *c;
            for j in 0..m {
                let mut ej = 0u128;
                for i in 0..m {
                    ej = (ej + e[i] as u128 * s_n[i][j] as u128) % ord as u128;
                }
                term = mul_mod(term, pow_mod(self.point[j], ej as u64, p), p);
            }
            acc = (acc + term) % p;
        }
        acc
    }
}

/// Verdict for a single step `n`.
pub fn evaluate_modular(
    g: &Hypersurface,
    map: &MonomialMap,
    w: &[MonomialScalar],
    n: u64,
    primes: &[ModPrime],
) -> Result<Verdict> {
    check_primes(g, w, primes)?;
    for &prime in primes {
        let ev = PrimeEval::new(prime, g, w);
        let s_n = pow_matrix_mod(&map_mod(map, prime.p - 1), n, prime.p - 1);
        if ev.eval(&s_n) != 0 {
            return Ok(Verdict::Nonzero);
        }
    }
    Ok(Verdict::ZeroCandidate)
}

fn check_primes(g: &Hypersurface, w: &[MonomialScalar], primes: &[ModPrime]) -> Result<()> {
    let data = ModularData::new(g, w);
    for mp in primes {
        let fresh = ModPrime::new(mp.p, &data)?;
        if fresh.conductor != mp.conductor {
            return Err(Error::Config(format!("prime {} was set up for a different conductor", mp.p)));
        }
    }
    Ok(())
}

/// Residue flags `G(Phi^(n)(w)) == 0 mod p` for `n = 0..=n_max` and one prime.
fn scan_one(g: &Hypersurface, map: &MonomialMap, w: &[MonomialScalar], n_max: u64, prime: ModPrime) -> Vec<bool> {
    let ev = PrimeEval::new(prime, g, w);
    let ord = prime.p - 1;
    let s = map_mod(map, ord);
    let mut s_n = identity_mod(map.dim());
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        if n > 0 {
            s_n = mat_mul_mod(&s_n, &s, ord);
        }
        out.push(ev.eval(&s_n) == 0);
    }
    out
}

/// Steps `n <= n_max` where every prime reports a zero residue.
pub fn modular_scan(
    g: &Hypersurface,
    map: &MonomialMap,
    w: &[MonomialScalar],
    n_max: u64,
    primes: &[ModPrime],
) -> Result<Vec<u64>> {
    check_primes(g, w, primes)?;
    let per_prime: Vec<Vec<bool>> = crate::par::map(primes, |&p| scan_one(g, map, w, n_max, p));
    Ok((0..=n_max).filter(|&n| per_prime.iter().all(|f| f[n as usize])).collect())
}
