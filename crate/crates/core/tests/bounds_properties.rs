use num_traits::ToPrimitive;
use orbitlab::bounds::{bell_numbers, compare_count_u64, evaluate_bound, BoundParams, FormulaId};
use proptest::prelude::*;

fn params(names: &[&str], vals: &[u64]) -> BoundParams {
    names.iter().zip(vals).fold(BoundParams::default(), |p, (n, v)| p.with(n, *v))
}

/// Log of the bound, or a huge offset plus its log-log when the log overflows.
fn size(f: FormulaId, p: &BoundParams) -> f64 {
    let b = evaluate_bound(f, p).unwrap();
    if b.ln_lower < f64::MAX {
        b.ln()
    } else {
        1e300 + b.ln_ln_lower
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bounds_never_decrease(
        f in prop::sample::select(FormulaId::ALL.to_vec()),
        vals in prop::collection::vec(2u64..9, 4),
        which in 0usize..4,
    ) {
        let names = f.parameters();
        let p = params(names, &vals);
        let i = which % names.len();
        let up = p.clone().with(names[i], vals[i] + 1);
        prop_assert!(size(f, &up) >= size(f, &p) * (1.0 - 1e-12), "{} at {:?}", f, p);
    }

    #[test]
    fn theorem_3_2_is_linear_in_d(n in 1u64..6, d in 1u64..10_000) {
        let one = evaluate_bound(FormulaId::T32, &BoundParams::default().with("n", n).with("D", 1)).unwrap();
        let b = evaluate_bound(FormulaId::T32, &BoundParams::default().with("n", n).with("D", d)).unwrap();
        prop_assert!((b.ln() - one.ln() - (d as f64).ln()).abs() < 1e-9 * b.ln().max(1.0));
    }

    #[test]
    fn bell_bound_exceeds_bell_numbers(k in 2usize..60) {
        let bell = &bell_numbers(k)[k];
        let b = evaluate_bound(FormulaId::Bell, &BoundParams::default().with("k", k as u64)).unwrap();
        prop_assert!(bell.to_f64().unwrap().ln() < b.ln_lower);
    }

    #[test]
    fn comparison_is_sound(f in prop::sample::select(FormulaId::ALL.to_vec()), vals in prop::collection::vec(2u64..5, 4), c in 0u64..1_000_000) {
        let b = evaluate_bound(f, &params(f.parameters(), &vals)).unwrap();
        if compare_count_u64(c, &b) {
            prop_assert!((c as f64).ln() <= b.ln_upper);
        }
    }
}

#[test]
fn missing_parameters_are_reported() {
    let err = evaluate_bound(FormulaId::L26, &BoundParams::default().with("k", 3)).unwrap_err();
    assert!(err.to_string().contains("r"), "{err}");
}
