use std::sync::Arc;

use darboux_core::analysis::{darboux_sums, OracleFunction, Partition, RangeFunction, StepFunction};
use darboux_core::cut::{audit_translation_group, CutBudget, RationalCut};
use darboux_core::extension::{
    audit_sandwich, darboux_extension, darboux_set, extension_pair, random_partial_map, DEFAULT_SEARCH_BUDGET,
};
use darboux_core::poset::generate::{all_lattices_up_to, random_poset};
use darboux_core::rational::{int, rat, Extended, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..200, 1i64..40).prop_map(|(n, d)| rat(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..400, 1i64..40).prop_map(|(n, d)| rat(n, d))
}

fn eps() -> impl Strategy<Value = Rational> {
    (1u32..40).prop_map(|k| rat(1, 1i64 << k.min(40)))
}

fn step_function() -> impl Strategy<Value = StepFunction> {
    (prop::collection::btree_set(1i64..100, 0..6), prop::collection::vec(-20i64..20, 7)).prop_map(|(cuts, vals)| {
        let mut breaks = vec![int(0)];
        breaks.extend(cuts.into_iter().map(|c| rat(c, 100)));
        breaks.push(int(1));
        let values = vals.into_iter().take(breaks.len() - 1).map(|v| rat(v, 3)).collect();
        StepFunction::new(breaks, values).unwrap()
    })
}

fn builtin(index: usize) -> OracleFunction {
    let (a, b) = (int(0), int(1));
    match index {
        0 => OracleFunction::identity(a, b),
        1 => OracleFunction::affine(a, b, int(-2), rat(1, 3)),
        2 => OracleFunction::dirichlet(a, b),
        3 => OracleFunction::sqrt(a, b),
        4 => OracleFunction::square(a, b),
        _ => OracleFunction::monotone_table(vec![a, rat(1, 4), b], vec![int(0), int(2), int(3)]),
    }
    .unwrap()
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::btree_set(1i64..64, 0..8).prop_map(|cuts| {
        let mut breaks = vec![int(0)];
        breaks.extend(cuts.into_iter().map(|c| rat(c, 64)));
        breaks.push(int(1));
        Partition::new(breaks).unwrap()
    })
}

fn le(a: &Extended, b: &Extended) -> bool {
    a <= b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sqrt_enclosure_is_sound_and_narrow(q in positive_rational(), eps in eps()) {
        let budget = CutBudget::default();
        let e = RationalCut::sqrt(&q).unwrap().refine(&eps, budget).unwrap();
        prop_assert!(e.width() <= eps);
        prop_assert!(&e.lo * &e.lo <= q);
        prop_assert!(q <= &e.hi * &e.hi);
    }

    #[test]
    fn finer_refinement_nests(q in positive_rational(), k in 1u32..30) {
        let budget = CutBudget::default();
        let x = RationalCut::sqrt(&q).unwrap();
        let coarse = x.refine(&rat(1, 1i64 << k), budget).unwrap();
        let fine = x.refine(&rat(1, 1i64 << (k + 5)), budget).unwrap();
        prop_assert!(fine.is_within(&coarse));
    }

    #[test]
    fn rational_arithmetic_enclosures_contain_exact_value(a in rational(), b in rational(), c in rational()) {
        let budget = CutBudget::default();
        let eps = rat(1, 1 << 20);
        let (x, y) = (RationalCut::from_rational(a.clone()), RationalCut::from_rational(b.clone()));
        let sum = x.add(&y).unwrap().refine(&eps, budget).unwrap();
        prop_assert!(sum.contains(&(&a + &b)));
        let scaled = x.scale(&c).refine(&eps, budget).unwrap();
        prop_assert!(scaled.contains(&(&a * &c)));
        let prod = x.mul_signed(&y, budget).unwrap().refine(&eps, budget).unwrap();
        prop_assert!(prod.contains(&(&a * &b)));
    }

    #[test]
    fn sqrt_products_contain_the_square(q in positive_rational()) {
        let budget = CutBudget::default();
        let eps = rat(1, 1 << 24);
        let s = RationalCut::sqrt(&q).unwrap();
        let e = s.mul_positive(&s, budget).unwrap().refine(&eps, budget).unwrap();
        prop_assert!(e.contains(&q));
        let n = s.neg().add(&s).unwrap().refine(&eps, budget).unwrap();
        prop_assert!(n.contains(&int(0)));
    }

    #[test]
    fn translations_form_a_group(
        shifts in prop::collection::vec(rational(), 1..4),
        roots in prop::collection::vec(positive_rational(), 1..4),
    ) {
        let cuts: Vec<RationalCut> = roots.iter().map(|q| RationalCut::sqrt(q).unwrap()).collect();
        let report = audit_translation_group(&shifts, &cuts, &rat(1, 1 << 20), CutBudget::default()).unwrap();
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn refinement_tightens_darboux_sums(index in 0usize..6, p in partition(), q in partition()) {
        let f = builtin(index);
        let fine = p.common_refinement(&q).unwrap();
        let coarse = darboux_sums(&f, &p);
        let refined = darboux_sums(&f, &fine);
        prop_assert!(le(&coarse.lower, &refined.lower));
        prop_assert!(le(&refined.lower, &refined.upper));
        prop_assert!(le(&refined.upper, &coarse.upper));
    }

    #[test]
    fn negation_swaps_lower_and_upper_sums(index in 0usize..6, p in partition()) {
        let f = builtin(index);
        let s = darboux_sums(&f, &p);
        let n = darboux_sums(&f.neg(), &p);
        prop_assert_eq!(n.upper, -s.lower);
        prop_assert_eq!(n.lower, -s.upper);
    }

    #[test]
    fn step_sums_agree_once_aligned(s in step_function(), p in partition()) {
        let expected: Rational = s.breaks().windows(2).zip(s.values()).map(|(w, v)| (&w[1] - &w[0]) * v).sum();
        let f = OracleFunction::step(s).unwrap();
        let aligned = Partition::aligned(&f).common_refinement(&p).unwrap();
        let sums = darboux_sums(&f, &aligned);
        prop_assert_eq!(&sums.lower, &Extended::Finite(expected.clone()));
        prop_assert_eq!(&sums.upper, &Extended::Finite(expected));
    }

    #[test]
    fn ranges_contain_point_values(index in 0usize..6, x in 0i64..=64) {
        let f = builtin(index);
        let x = rat(x, 64);
        if let Some(v) = f.value_at(&x) {
            let r = f.range_on(&darboux_core::Span::closed(int(0), int(1)));
            prop_assert!(r.inf <= Extended::Finite(v.clone()) && Extended::Finite(v) <= r.sup);
        }
    }

    #[test]
    fn extensions_sandwich_every_extension(seed in any::<u64>(), n in 1usize..6, t in 0usize..100, d in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lattices = all_lattices_up_to(4);
        let target = Arc::new(lattices[t % lattices.len()].clone());
        let source = Arc::new(random_poset(&mut rng, n, 0.5));
        let psi = random_partial_map(&mut rng, source, target, d).unwrap();
        let report = audit_sandwich(&psi, DEFAULT_SEARCH_BUDGET).unwrap();
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn darboux_extension_is_idempotent(seed in any::<u64>(), n in 1usize..7, t in 0usize..100, d in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lattices = all_lattices_up_to(5);
        let target = Arc::new(lattices[t % lattices.len()].clone());
        let source = Arc::new(random_poset(&mut rng, n, 0.4));
        let psi = random_partial_map(&mut rng, source, target, d).unwrap();
        let ex = darboux_extension(&psi).unwrap();
        prop_assert!(psi.domain().is_subset(&ex.domain()));
        prop_assert_eq!(darboux_set(&ex).unwrap(), darboux_set(&psi).unwrap());
        prop_assert_eq!(extension_pair(&ex).unwrap(), extension_pair(&psi).unwrap());
    }
}
