use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use orbitlab::cyclo::{cyclotomic_polynomial, euler_phi, group_order_d, MonomialScalar};
use orbitlab::lrs::{degeneracy_order, interleave, residue_decompose, zero_set, LinearRecurrence};
use orbitlab::poly::QPoly;
use proptest::prelude::*;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// A factor of the characteristic polynomial together with its roots.
#[derive(Clone, Debug)]
enum Factor {
    Rational(i64, i64),
    /// all primitive `n`-th roots of unity scaled by `q`
    Scaled(u64, i64),
}

impl Factor {
    fn poly(&self) -> QPoly {
        match *self {
            Factor::Rational(p, q) => QPoly::new(vec![-rat(p, q), rat(1, 1)]),
            Factor::Scaled(n, q) => {
                let phi = euler_phi(n) as i32;
                let c = cyclotomic_polynomial(n);
                QPoly::new(
                    c.iter()
                        .enumerate()
                        .map(|(i, a)| BigRational::from_integer(a * BigInt::from(q).pow((phi - i as i32) as u32)))
                        .collect(),
                )
            }
        }
    }

    fn roots(&self) -> Vec<MonomialScalar> {
        match *self {
            Factor::Rational(p, q) => vec![MonomialScalar::rational(rat(p, q)).unwrap()],
            Factor::Scaled(n, q) => (1..n as i64)
                .filter(|a| a.gcd(&(n as i64)) == 1)
                .map(|a| MonomialScalar::new(rat(q, 1), a, n).unwrap())
                .collect(),
        }
    }
}

fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![
        (prop::sample::select(&[-3i64, -2, -1, 1, 2, 3][..]), prop::sample::select(&[1i64, 2][..]))
            .prop_map(|(p, q)| Factor::Rational(p, q)),
        (prop::sample::select(&[3u64, 4, 6][..]), prop::sample::select(&[1i64, 2, 3][..]))
            .prop_map(|(n, q)| Factor::Scaled(n, q)),
    ]
}

fn recurrence_from(factors: &[Factor], init: &[i64]) -> (LinearRecurrence, QPoly) {
    let f = factors.iter().fold(QPoly::one(), |acc, x| acc.mul(&x.poly()));
    let m = f.degree().unwrap();
    let coeffs: Vec<BigRational> = (1..=m).map(|i| -f.coeff(m - i)).collect();
    let mut init: Vec<BigRational> = (0..m).map(|i| BigRational::from_integer(init[i % init.len()].into())).collect();
    if init.iter().all(Zero::is_zero) {
        init[m - 1] = rat(1, 1);
    }
    (LinearRecurrence::new(coeffs, init).unwrap(), f)
}

fn integer_recurrence() -> impl Strategy<Value = LinearRecurrence> {
    (1usize..4)
        .prop_flat_map(|m| (prop::collection::vec(-3i64..=3, m), prop::collection::vec(-3i64..=3, m)))
        .prop_filter_map("initial terms must not all vanish", |(mut c, init)| {
            if c.last() == Some(&0) {
                *c.last_mut().unwrap() = 1;
            }
            LinearRecurrence::from_ints(&c, &init).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn backward_then_forward_reproduces(l in integer_recurrence(), k in 1usize..8) {
        let m = l.order();
        let back = l.backward(k);
        let mut start = back[..m.min(k)].to_vec();
        start.extend(l.init().iter().take(m - start.len()).cloned());
        let shifted = LinearRecurrence::new(l.coeffs().to_vec(), start).unwrap();
        let mut expect = back.clone();
        expect.extend(l.terms(m));
        prop_assert_eq!(shifted.terms(k + m), expect);
    }

    #[test]
    fn interleave_reproduces_the_sequence(l in integer_recurrence(), d in 1u64..5) {
        let classes = residue_decompose(&l, d).unwrap();
        prop_assert_eq!(interleave(&classes, 40), l.terms(40));
        for c in &classes {
            let sub: Vec<BigRational> = l.terms(40).into_iter().skip(c.residue as usize).step_by(d as usize).collect();
            prop_assert_eq!(c.terms(sub.len()), sub);
        }
    }

    #[test]
    fn progressions_consist_of_zeros(factors in prop::collection::vec(factor(), 1..4), init in prop::collection::vec(-2i64..=2, 1..4)) {
        let (l, _) = recurrence_from(&factors, &init);
        let z = zero_set(&l, 40).unwrap();
        let terms = l.terms(120);
        for p in &z.progressions {
            for n in (p.offset..120).step_by(p.difference as usize) {
                prop_assert!(terms[n as usize].is_zero(), "u_{} in {:?}", n, p);
            }
        }
        let want: Vec<u64> = (0..=40).filter(|&n| terms[n as usize].is_zero()).collect();
        prop_assert_eq!(z.zeros_in_window(), want);
        prop_assert!(z.all_bounds_hold());
    }

    #[test]
    fn degeneracy_order_is_the_root_ratio_group(factors in prop::collection::vec(factor(), 1..4)) {
        let (_, f) = recurrence_from(&factors, &[1]);
        let mut roots: Vec<MonomialScalar> = factors.iter().flat_map(|x| x.roots()).collect();
        roots.sort_by_key(|r| r.to_string());
        roots.dedup();
        prop_assert_eq!(degeneracy_order(&f).unwrap(), group_order_d(&roots));
    }
}
