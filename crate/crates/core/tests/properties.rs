use proptest::prelude::*;

use pkp_core::exactnum::{factorial, rank_count, stirling1_unsigned};
use pkp_core::oracle::{count_solutions, count_solutions_reference, Caps};
use pkp_core::{evaluate, generate, ExactRational, ParameterSet, SeededRng, Validity, Variant};

fn arb_variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(Variant::ALL.to_vec())
}

/// Valid tiny parameter sets with prime q.
fn arb_small_params() -> impl Strategy<Value = ParameterSet> {
    (arb_variant(), prop::sample::select(vec![2u64, 3, 5, 7, 11]), 1u32..4, 2u32..6, 1u32..3)
        .prop_filter_map("constraints", |(v, q, ell, m, n)| ParameterSet::new(v, q, ell, m, n).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_are_valid_and_solved(p in arb_small_params(), seed in any::<u64>()) {
        let inst = generate(&p, &mut SeededRng::new(seed)).unwrap();
        inst.validate().unwrap();
        let count = count_solutions(&inst, &Caps::default()).unwrap();
        prop_assert!(count.contains_secret);
        prop_assert!(count.n_sol >= 1 && count.n_sol <= count.enumerated);
        prop_assert_eq!(count.n_sol, count_solutions_reference(&inst, &Caps::default()).unwrap());
    }

    #[test]
    fn same_seed_same_instance(p in arb_small_params(), seed in any::<u64>()) {
        let a = generate(&p, &mut SeededRng::new(seed)).unwrap();
        let b = generate(&p, &mut SeededRng::new(seed)).unwrap();
        prop_assert_eq!(a.to_text(true), b.to_text(true));
    }

    #[test]
    fn expectations_consistent(
        v in arb_variant(),
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 251]),
        ell in 1u32..8,
        m in 2u32..12,
    ) {
        let Ok(p) = ParameterSet::new(v, q, ell, m, 1) else { return Ok(()) };
        let r = evaluate(&p, Validity::Strict).unwrap();
        prop_assert!(r.exact >= ExactRational::one());
        prop_assert_eq!(&r.exact - &ExactRational::one(), r.exact_minus_one);
        prop_assert_eq!(r.heuristic, ExactRational::new(factorial(m), pkp_core::exactnum::pow(q, ell.into())));
    }

    #[test]
    fn rank_count_transpose_symmetry(m in 1u32..6, n in 1u32..6, q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        for r in 0..=m.min(n) {
            prop_assert_eq!(rank_count(m, n, r, q), rank_count(n, m, r, q));
        }
    }

    #[test]
    fn stirling_rows_sum_to_factorial(m in 1u32..=12) {
        let s: num_bigint::BigUint = (1..=m).map(|k| stirling1_unsigned(m, k).unwrap()).sum();
        prop_assert_eq!(s, factorial(m));
    }
}
