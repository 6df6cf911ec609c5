mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{int_scalars, iterate, random_instance, random_map, random_point, scalars, Rng};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use orbitlab::bounds::{bell_numbers, evaluate_bound, BoundParams, FormulaId};
use orbitlab::cyclo::{is_multiplicatively_independent, CyclotomicNumber, MonomialScalar};
use orbitlab::dynamics::{
    applicable_theorems, dominant_term_threshold, evaluate_modular, intersection_set, synchronized_intersection,
    default_primes, Hypersurface, ModularData, Mode, MonomialMap, ScanConfig, Term, TheoremId, Verdict,
    Verification,
};
use orbitlab::lrs::{degeneracy_order, interleave, residue_decompose, zero_set, LinearRecurrence, Progression};
use orbitlab::poly::QPoly;
use orbitlab::reports::{reproduce_suite, Manifest, RunOptions};
use orbitlab::units::{all_partitions, solve_units, suitable_partitions, UnitInstance};

/// Collects failed checks for one criterion and reports them on stderr.
struct Criterion {
    id: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: &'static str) -> Self {
        Criterion { id, failures: vec![] }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }

    fn finish(self) {
        let mut err = std::io::stderr();
        if self.failures.is_empty() {
            writeln!(err, "PASS {}", self.id).unwrap();
        } else {
            writeln!(err, "FAIL {}: {}", self.id, self.failures.join("; ")).unwrap();
        }
        assert!(self.failures.is_empty(), "{} failed: {:?}", self.id, self.failures);
    }
}

fn map(rows: &[&[u64]]) -> MonomialMap {
    MonomialMap::from_u64(rows).unwrap()
}

fn hyper(m: usize, terms: &[(i64, &[u64])]) -> Hypersurface {
    Hypersurface::new(m, terms.iter().map(|&(c, e)| Term::from_ints(c, e)).collect()).unwrap()
}

fn steps(ms: &[orbitlab::dynamics::Member]) -> Vec<u64> {
    ms.iter().map(|m| m.n).collect()
}

#[test]
fn criterion_01_squaring_map_against_a_line() {
    let mut c = Criterion::new("1 squaring map, X1 - X2 + 1 at (2, 3)");
    let start = Instant::now();
    let phi = map(&[&[2, 0], &[0, 2]]);
    let g = hyper(2, &[(1, &[1, 0]), (-1, &[0, 1]), (1, &[0, 0])]);
    let w = int_scalars(&[2, 3]);
    let report = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Exact, 30)).unwrap();
    let elapsed = start.elapsed();

    // oracle: big-integer values for small n, and 2^(2^n) - 3^(2^n) + 1 = 2 mod 3 for every n >= 1
    let mut oracle = vec![];
    for n in 0..=30u32 {
        let zero = if n <= 14 {
            let e = 1usize << n;
            (Pow::pow(BigInt::from(2), e) - Pow::pow(BigInt::from(3), e) + 1i32).is_zero()
        } else {
            false
        };
        if n >= 1 {
            c.check(BigUint::from(2u8).modpow(&(BigUint::one() << n), &BigUint::from(3u8)) == BigUint::one(), "mod 3");
        }
        if zero {
            oracle.push(n as u64);
        }
    }
    c.eq(oracle.clone(), vec![0], "oracle members");
    c.eq(steps(&report.members), oracle, "scanned members");
    c.check(report.members.iter().all(|m| m.verification == Verification::Exact), "all members exact");

    let t31 = report.bounds.iter().find(|b| b.theorem == TheoremId::T31);
    c.check(t31.is_some(), "T3.1 bound present");
    if let Some(b) = t31 {
        // (8 * 3)^(4 * 3^5), three monomials
        let want = 4.0 * 243.0 * 24f64.log10();
        let got = b.bound.log10.unwrap_or(f64::NAN);
        c.check((got - want).abs() < 1e-6, format!("log10 bound {got} vs {want}"));
        c.check(b.count_below_bound, "count below bound");
    }
    c.check(elapsed < Duration::from_secs(5), format!("runtime {elapsed:?}"));
    c.finish();
}

#[test]
fn criterion_02_triangular_map() {
    let mut c = Criterion::new("2 triangular map (X1^2 X2, X2^3), X1 - 12 at (2, 3)");
    let phi = map(&[&[2, 1], &[0, 3]]);
    let g = hyper(2, &[(1, &[1, 0]), (-12, &[0, 0])]);
    let w = int_scalars(&[2, 3]);
    let report = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Exact, 20)).unwrap();

    // oracle: x grows strictly once x >= 2 and y >= 3, so only small n can hit 12
    let (mut x, mut y) = (BigInt::from(2), BigInt::from(3));
    let mut oracle = vec![];
    for n in 0..=20u64 {
        if x == BigInt::from(12) {
            oracle.push(n);
        }
        if x > BigInt::from(12) {
            break;
        }
        let nx = &x * &x * &y;
        y = &y * &y * &y;
        x = nx;
    }
    c.eq(oracle.clone(), vec![1], "oracle members");
    c.eq(steps(&report.members), oracle, "scanned members");

    let hyps = applicable_theorems(&phi, &g, &w);
    let t37 = hyps.iter().find(|h| h.theorem == TheoremId::T37);
    c.check(t37.is_some_and(|h| h.applicable), "T3.7 applicable");
    c.check(report.bounds.iter().any(|b| b.theorem == TheoremId::T37), "T3.7 bound in ledger");
    c.check(report.bounds.iter().all(|b| b.count_below_bound), "ledger holds");
    c.finish();
}

fn rational_terms(xs: impl Iterator<Item = BigInt>) -> Vec<BigRational> {
    xs.map(BigRational::from_integer).collect()
}

#[test]
fn criterion_03_degenerate_recurrence() {
    let mut c = Criterion::new("3 degenerate recurrence 2^n + (-2)^n");
    let l = LinearRecurrence::from_ints(&[0, 4], &[2, 0]).unwrap();
    c.eq(degeneracy_order(&QPoly::from_ints(&[-4, 0, 1])).unwrap(), 2, "degeneracy order");

    let oracle = rational_terms((0..=50u32).map(|n| BigInt::from(2).pow(n) + BigInt::from(-2).pow(n)));
    c.eq(l.terms(51), oracle.clone(), "terms");

    let z = zero_set(&l, 50).unwrap();
    c.eq(z.progressions.clone(), vec![Progression { offset: 1, difference: 2 }], "progressions");
    c.eq(z.isolated.clone(), vec![], "isolated zeros");
    let oracle_zeros: Vec<u64> = (0..=50).filter(|&n| oracle[n as usize].is_zero()).collect();
    c.eq(z.zeros_in_window(), oracle_zeros, "zeros in window");

    let classes = residue_decompose(&l, 2).unwrap();
    c.eq(interleave(&classes, 51), oracle, "interleave reproduces all scanned terms");
    c.finish();
}

#[test]
fn criterion_04_fibonacci() {
    let mut c = Criterion::new("4 Fibonacci");
    let l = LinearRecurrence::from_ints(&[1, 1], &[0, 1]).unwrap();
    c.eq(degeneracy_order(&QPoly::from_ints(&[-1, -1, 1])).unwrap(), 1, "degeneracy order");

    let mut fib = vec![BigInt::zero(), BigInt::one()];
    while fib.len() < 101 {
        let next = &fib[fib.len() - 1] + &fib[fib.len() - 2];
        fib.push(next);
    }
    c.eq(l.terms(101), rational_terms(fib.iter().cloned()), "terms");

    let z = zero_set(&l, 100).unwrap();
    let oracle: Vec<u64> = (0..=100).filter(|&n| fib[n as usize].is_zero()).collect();
    c.eq(oracle.clone(), vec![0], "oracle zeros");
    c.eq(z.isolated.clone(), oracle, "isolated zeros");
    c.check(z.progressions.is_empty(), "no progressions");
    c.check(z.simple && z.nondegenerate, "simple and nondegenerate");
    let l22 = z.bounds.iter().find(|b| b.bound.formula == FormulaId::L22Poly);
    c.check(l22.is_some_and(|b| b.holds && b.count == 1), "count below the polynomial-coefficient bound");
    c.check(z.all_bounds_hold(), "ledger holds");
    c.finish();
}

/// Exponent vector of `x` over the given primes; `None` when `x` has another prime factor.
fn prime_exponents(mut x: u64, primes: &[u64]) -> Option<Vec<i64>> {
    let mut out = vec![];
    for &p in primes {
        let mut e = 0;
        while x.is_multiple_of(p) {
            x /= p;
            e += 1;
        }
        out.push(e);
    }
    (x == 1).then_some(out)
}

fn det3(m: &[Vec<i64>]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[test]
fn criterion_05_multiplicative_independence() {
    let mut c = Criterion::new("5 multiplicative independence");
    let r = is_multiplicatively_independent(&int_scalars(&[2, 3])).unwrap();
    c.check(r.independent && r.certificate.is_none(), "(2, 3) independent");

    let r = is_multiplicatively_independent(&int_scalars(&[4, 8])).unwrap();
    c.check(!r.independent, "(4, 8) dependent");
    match &r.certificate {
        Some(k) => {
            let k: Vec<i64> = k.iter().map(|x| x.to_i64().unwrap()).collect();
            c.check(k == [3, -2] || k == [-3, 2], format!("certificate {k:?}"));
            let value = BigRational::from_integer(4.into()).pow(k[0] as i32)
                * BigRational::from_integer(8.into()).pow(k[1] as i32);
            c.check(value.is_one(), "certificate re-verifies");
        }
        None => c.check(false, "certificate missing"),
    }

    let vals = [6i64, 10, 15];
    let r = is_multiplicatively_independent(&int_scalars(&vals)).unwrap();
    c.check(r.independent, "(6, 10, 15) independent");
    let m: Vec<Vec<i64>> = vals.iter().map(|&v| prime_exponents(v as u64, &[2, 3, 5]).unwrap()).collect();
    c.eq(det3(&m), -2, "determinant of the prime-exponent matrix");
    c.finish();
}

#[test]
fn criterion_06_unit_equation() {
    let mut c = Criterion::new("6 unit equation x1 + x2 = x3");
    let gens = vec![int_scalars(&[2, 1, 1]), int_scalars(&[1, 2, 1]), int_scalars(&[1, 1, 2])];
    let inst = UnitInstance {
        coeffs: vec![CyclotomicNumber::from_int(1), CyclotomicNumber::from_int(1), CyclotomicNumber::from_int(-1)],
        generators: gens,
        box_radius: 6,
    };
    let report = solve_units(&inst, None).unwrap();

    // oracle: every box point evaluated with exact rationals
    let two = BigRational::from_integer(2.into());
    let mut oracle = vec![];
    for a in -6i32..=6 {
        for b in -6i32..=6 {
            for d in -6i32..=6 {
                let x: Vec<BigRational> =
                    [2 * a + b + d, a + 2 * b + d, a + b + 2 * d].iter().map(|&e| two.clone().pow(e)).collect();
                if &x[0] + &x[1] == x[2] {
                    oracle.push(vec![a as i64, b as i64, d as i64]);
                }
            }
        }
    }
    let got: Vec<Vec<i64>> = report.solutions.iter().map(|s| s.exponents.clone()).collect();
    c.eq(got, oracle, "solutions");
    for s in &report.solutions {
        let e: Vec<i64> = s.x.iter().map(log2_exact).collect();
        c.check(e[0] == e[1] && e[2] == e[0] + 1, format!("pattern 2^a + 2^a = 2^(a+1) at {:?}", s.exponents));
        c.check(s.nondegenerate, "non-degenerate");
    }
    c.eq(report.classes.len(), 1, "proportionality classes");
    if let Some(cls) = report.classes.first() {
        c.eq(cls.representative.clone(), int_scalars(&[1, 1, 2]), "representative");
    }
    let l26 = report.bounds.iter().find(|b| b.bound.formula == FormulaId::L26);
    c.check(l26.is_some_and(|b| b.holds), "count below the unit-equation bound");
    if let Some(b) = l26 {
        let want = 384.0 * 24f64.log10();
        let got = b.bound.log10.unwrap_or(f64::NAN);
        c.check((got - 530.0).abs() < 0.1 && (got - want).abs() < 1e-6, format!("log10 bound {got}"));
    }
    c.finish();
}

fn log2_exact(v: &MonomialScalar) -> i64 {
    let q = v.modulus();
    let (n, d) = (q.numer().magnitude(), q.denom().magnitude());
    assert!(v.is_root_of_unity() || n.count_ones() + d.count_ones() == 2);
    n.trailing_zeros().unwrap() as i64 - d.trailing_zeros().unwrap() as i64
}

/// Stirling-style recurrence `B_{n+1} = sum_k C(n, k) B_k`.
fn bell_oracle(n: usize) -> Vec<BigUint> {
    let mut b = vec![BigUint::one()];
    for i in 0..n {
        let mut s = BigUint::zero();
        let mut binom = BigUint::one();
        for (k, bk) in b.iter().enumerate() {
            s += &binom * bk;
            binom = binom * BigUint::from(i - k) / BigUint::from(k + 1);
        }
        b.push(s);
    }
    b
}

#[test]
fn criterion_07_partitions_and_bell() {
    let mut c = Criterion::new("7 suitable partitions and Bell bound");
    let bell = bell_oracle(12);
    c.eq(bell_numbers(12), bell.clone(), "Bell numbers");
    for (k, want) in [(2usize, 1usize), (4, 4), (5, 11)] {
        // inclusion-exclusion over singleton blocks
        let mut count = BigInt::zero();
        let mut binom = BigInt::one();
        for j in 0..=k {
            let term = &binom * BigInt::from(bell[k - j].clone());
            count += if j % 2 == 0 { term } else { -term };
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
        c.eq(count, BigInt::from(want), &format!("oracle suitable count k={k}"));
        c.eq(suitable_partitions(k).unwrap().len(), want, &format!("suitable partitions k={k}"));
        c.eq(all_partitions(k).unwrap().len(), bell[k].to_usize().unwrap(), &format!("all partitions k={k}"));
    }
    for k in 2..=10u64 {
        let rhs = k as f64 * (0.792 * k as f64 / ((k + 1) as f64).ln()).ln();
        let lhs = bell[k as usize].to_f64().unwrap().ln();
        c.check(lhs < rhs, format!("Bell({k}) below bound"));
        let b = evaluate_bound(FormulaId::Bell, &BoundParams::default().with("k", k)).unwrap();
        c.check((b.ln() - rhs).abs() < 1e-9, format!("bell formula at k={k}"));
    }
    let tight = evaluate_bound(FormulaId::Bell, &BoundParams::default().with("k", 4)).unwrap();
    c.check(tight.ln().exp() > 15.0 && tight.ln().exp() < 15.02, "tight case k=4");
    c.finish();
}

/// Comparable size of a bound: its log when finite, else a huge offset plus its log-log.
fn size(f: FormulaId, p: &BoundParams) -> f64 {
    let b = evaluate_bound(f, p).unwrap();
    if b.ln().is_finite() && b.ln() < f64::MAX {
        b.ln()
    } else {
        1e300 + b.ln_ln_lower
    }
}

fn grid(names: &[&str], f: &mut impl FnMut(BoundParams)) {
    fn go(names: &[&str], acc: BoundParams, f: &mut impl FnMut(BoundParams)) {
        match names.split_first() {
            None => f(acc),
            Some((n, rest)) => {
                for v in 2..=6 {
                    go(rest, acc.clone().with(n, v), f);
                }
            }
        }
    }
    go(names, BoundParams::default(), f)
}

#[test]
fn criterion_08_bound_calculator() {
    let mut c = Criterion::new("8 bound calculator spot values and monotonicity");
    let l21 = evaluate_bound(FormulaId::L21Simple, &BoundParams::default().with("m", 2)).unwrap();
    let want = 512.0 * 2f64.log10();
    c.check((l21.log10() - 154.13).abs() < 0.01 && (l21.log10() - want).abs() < 1e-9, "L2.1 simple at m=2");
    let dub = evaluate_bound(FormulaId::Dubickas, &BoundParams::default().with("d", 1).with("m", 2)).unwrap();
    c.check((dub.ln().exp() - 61.8).abs() < 0.5, format!("Eq2.3-dubickas at d=1, m=2: {}", dub.ln().exp()));

    let mut checked = 0;
    for f in FormulaId::ALL {
        let names = f.parameters();
        let variants: &[Option<&str>] = match f {
            FormulaId::C24 => &[None, Some("simple")],
            FormulaId::L25 => &[None, Some("galois")],
            _ => &[None],
        };
        for &var in variants {
            grid(names, &mut |p| {
                let p = match var {
                    Some(v) => p.variant(v),
                    None => p,
                };
                let base = size(f, &p);
                for n in names {
                    let v = match *n {
                        "m" => p.m,
                        "k" => p.k,
                        "a" => p.a,
                        "D" => p.big_d,
                        "d" => p.d,
                        "omega" => p.omega,
                        "r" => p.r,
                        _ => p.n,
                    }
                    .unwrap();
                    let up = size(f, &p.clone().with(n, v + 1));
                    checked += 1;
                    if up < base * (1.0 - 1e-12) {
                        c.check(false, format!("{f} decreases in {n} at {p:?}"));
                    }
                }
            });
        }
    }
    c.check(checked > 1000, "grid covered");
    c.finish();
}

#[test]
fn criterion_09_modular_exact_agreement() {
    let mut c = Criterion::new("9 hybrid and exact scans agree on 200 random instances");
    let start = Instant::now();
    let mut with_members = 0;
    for seed in 0..200u64 {
        let mut rng = Rng::new(0x5eed_0000 + seed);
        let (phi, g, w) = random_instance(&mut rng);
        let exact = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Exact, 12)).unwrap();
        let mut cfg = ScanConfig::new(Mode::Hybrid, 12);
        cfg.seed = seed;
        let hybrid = intersection_set(&phi, &g, &w, &cfg).unwrap();
        c.eq(hybrid.members.clone(), exact.members.clone(), &format!("seed {seed} members"));
        if !exact.members.is_empty() {
            with_members += 1;
        }

        // oracle: materialized substitution for the first few steps
        for n in 0..=3u64 {
            let zero = g.eval_at(&iterate(&phi, &w, n)).is_zero();
            c.check(zero == steps(&exact.members).contains(&n), format!("seed {seed} step {n} oracle"));
        }

        let data = ModularData::new(&g, &w);
        let primes = default_primes(&data, 5, seed);
        for n in steps(&exact.members) {
            let v = evaluate_modular(&g, &phi, &w, n, &primes).unwrap();
            c.check(v != Verdict::Nonzero, format!("seed {seed}: modular nonzero at exact zero {n}"));
        }
    }
    let elapsed = start.elapsed();
    c.check(with_members >= 40, format!("only {with_members} instances had members"));
    c.check(elapsed < Duration::from_secs(60), format!("runtime {elapsed:?}"));
    c.finish();
}

#[test]
fn criterion_10_synchronized_orbits() {
    let mut c = Criterion::new("10 synchronized orbits");
    let r = synchronized_intersection(
        &map(&[&[2]]),
        &map(&[&[3]]),
        &int_scalars(&[2]),
        &int_scalars(&[2]),
        &ScanConfig::new(Mode::Exact, 30),
    )
    .unwrap();
    c.eq(r.members.clone(), vec![0], "F = X^2, H = X^3 from 2");
    c.check(r.within_superset, "example within superset");

    for seed in 0..50u64 {
        let mut rng = Rng::new(0x5ec0_0000 + seed);
        let m = rng.range(1, 2) as usize;
        let f = random_map(&mut rng, m, 3);
        let h = random_map(&mut rng, m, 3);
        let w1 = random_point(&mut rng, m);
        let w2 = if rng.coin() { w1.clone() } else { random_point(&mut rng, m) };
        let r = synchronized_intersection(&f, &h, &w1, &w2, &ScanConfig::new(Mode::Exact, 10)).unwrap();
        let sup = r.superset.member_steps();
        c.check(r.members.iter().all(|n| sup.contains(n)), format!("seed {seed} subset"));
        c.check(r.within_superset, format!("seed {seed} flag"));
        for n in 0..=3u64 {
            let same = iterate(&f, &w1, n) == iterate(&h, &w2, n);
            c.check(same == r.members.contains(&n), format!("seed {seed} step {n} oracle"));
        }
    }
    c.finish();
}

#[test]
fn criterion_11_dominant_term_threshold() {
    let mut c = Criterion::new("11 dominant-term threshold");
    let phi = MonomialMap::power(2, 2);
    let g = hyper(2, &[(1, &[0, 1]), (-100, &[1, 0])]);
    let w = int_scalars(&[2, 3]);
    let t = dominant_term_threshold(&phi, &g, &w).unwrap();

    // oracle: 3^(2^n) > 100 * 2^(2^n) iff 2^n ln(3/2) > ln 100
    let oracle = (0..64u32).find(|&n| 2f64.powi(n as i32) * 1.5f64.ln() > 100f64.ln()).unwrap() as u64;
    c.eq(oracle, 4, "oracle threshold");
    c.eq(t.n0, Some(oracle), "threshold");
    let scan = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Exact, 20)).unwrap();
    c.check(scan.members.iter().all(|m| m.n < oracle), "no member at or beyond the threshold");
    c.check(scan.members.is_empty(), "no members at all");
    c.finish();
}

#[test]
fn shipped_manifest_reproduces() {
    let mut c = Criterion::new("shipped manifest");
    let suite = reproduce_suite(&Manifest::acceptance(), &RunOptions::default()).unwrap();
    for o in &suite.criteria {
        c.check(o.passed, format!("{}: {:?}", o.id, o.failures));
    }
    c.eq(suite.exit_code(), 0, "exit code");
    c.finish();
}

#[test]
fn hybrid_spot_check_finds_planted_zero() {
    let mut c = Criterion::new("hybrid planted zero");
    let phi = map(&[&[1, 1], &[0, 2]]);
    let w = scalars(&["2", "-1"]);
    let at = iterate(&phi, &w, 2);
    let v = hyper(2, &[(1, &[1, 1])]).eval_at(&at);
    let g = Hypersurface::new(2, vec![Term::from_ints(1, &[1, 1]), Term::new(v.neg(), common::ints(&[0, 0]))]).unwrap();
    let mut cfg = ScanConfig::new(Mode::Hybrid, 40);
    cfg.seed = 7;
    let r = intersection_set(&phi, &g, &w, &cfg).unwrap();
    c.check(steps(&r.members).contains(&2), "planted step found");
    c.check(r.members.iter().all(|m| m.verification == Verification::Exact), "confirmed exactly");
    c.finish();
}
