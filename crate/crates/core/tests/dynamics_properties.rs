mod common;

use common::{iterate, random_instance, random_map, random_point, Rng};
use num_bigint::BigUint;
use orbitlab::dynamics::{
    default_primes, evaluate_exact, evaluate_modular, intersection_set, orbit_point, synchronized_intersection,
    ExactConfig, ModularData, Mode, MonomialMap, ScanConfig, Verdict,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbit_point_matches_repeated_substitution(seed in any::<u64>(), n in 0u64..=6) {
        let mut rng = Rng::new(seed);
        let m = rng.range(1, 3) as usize;
        let phi = random_map(&mut rng, m, 2);
        let w = random_point(&mut rng, m);
        prop_assert_eq!(orbit_point(&phi, &w, n).unwrap().coordinates(), iterate(&phi, &w, n));
    }

    #[test]
    fn modular_nonzero_implies_exact_nonzero(seed in any::<u64>(), n in 0u64..=4) {
        let mut rng = Rng::new(seed);
        let (phi, g, w) = random_instance(&mut rng);
        let primes = default_primes(&ModularData::new(&g, &w), 3, seed);
        let exact = evaluate_exact(&g, &orbit_point(&phi, &w, n).unwrap(), &ExactConfig::default()).unwrap();
        if evaluate_modular(&g, &phi, &w, n, &primes).unwrap() == Verdict::Nonzero {
            prop_assert!(!exact.is_zero());
        }
        if exact.is_zero() {
            prop_assert_eq!(evaluate_modular(&g, &phi, &w, n, &primes).unwrap(), Verdict::ZeroCandidate);
        }
    }

    #[test]
    fn scan_modes_agree(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let (phi, g, w) = random_instance(&mut rng);
        let exact = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Exact, 10)).unwrap();
        let hybrid = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Hybrid, 10)).unwrap();
        let modular = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Modular, 10)).unwrap();
        prop_assert_eq!(&hybrid.members, &exact.members);
        let candidates = modular.member_steps();
        prop_assert!(exact.member_steps().iter().all(|n| candidates.contains(n)));
    }

    #[test]
    fn members_respect_applicable_bounds(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let (phi, g, w) = random_instance(&mut rng);
        let r = intersection_set(&phi, &g, &w, &ScanConfig::new(Mode::Exact, 10)).unwrap();
        for h in r.hypotheses.iter().filter(|h| h.applicable) {
            prop_assert!(r.bounds.iter().any(|b| b.theorem == h.theorem));
        }
        prop_assert!(r.bounds.iter().all(|b| b.count_below_bound));
    }

    #[test]
    fn synchronized_members_lie_in_superset(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let m = rng.range(1, 2) as usize;
        let f = random_map(&mut rng, m, 3);
        let h = random_map(&mut rng, m, 3);
        let w1 = random_point(&mut rng, m);
        let w2 = if rng.coin() { w1.clone() } else { random_point(&mut rng, m) };
        let r = synchronized_intersection(&f, &h, &w1, &w2, &ScanConfig::new(Mode::Exact, 8)).unwrap();
        let sup = r.superset.member_steps();
        prop_assert!(r.members.iter().all(|n| sup.contains(n)));
        prop_assert!(r.within_superset);
    }

    #[test]
    fn degrees_grow_when_rows_sum_to_two(rows in prop::collection::vec(prop::collection::vec(0u64..3, 3), 3), n in 0u64..6) {
        let mut rows = rows;
        for r in rows.iter_mut() {
            if r.iter().sum::<u64>() < 2 {
                r[0] += 2;
            }
        }
        let phi = MonomialMap::new(rows.iter().map(|r| r.iter().map(|&x| BigUint::from(x)).collect()).collect()).unwrap();
        let (a, b) = (phi.compose_power(n), phi.compose_power(n + 1));
        for i in 0..3 {
            let da: BigUint = a[i].iter().sum();
            let db: BigUint = b[i].iter().sum();
            prop_assert!(db > da);
        }
    }
}
