mod common;

use common::*;
use deskolem::deskolem::{assert_partial_positions, PartialPositions};
use deskolem::kernel::check;
use deskolem::normalize::{
    find_redexes, is_normal, normalize, normalize_with_budget, reduce_once,
    validate_frozen_propagation, FrozenPropagation, NormalizeError,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_checks_against_same_sequent(seed in any::<u64>(), which in 0usize..3, depth in 1usize..5) {
        let ctx = contexts()[which].clone();
        let mut g = Gen::new(seed);
        let (p, a) = g.proof(&ctx, depth);
        let s = sequent(&ctx, a);
        check(&p, &s).unwrap();
        let n = normalize(&p, &s.context).unwrap();
        prop_assert!(check(&n, &s).is_ok(), "{n}");
        prop_assert!(is_normal(&n));
        prop_assert_eq!(normalize(&n, &s.context).unwrap(), n);
    }

    #[test]
    fn every_single_step_preserves_the_sequent(seed in any::<u64>(), depth in 1usize..4) {
        let ctx = contexts()[1].clone();
        let mut g = Gen::new(seed);
        let (p, a) = g.proof(&ctx, depth);
        let s = sequent(&ctx, a);
        for r in find_redexes(&p) {
            let q = reduce_once(&p, &s.context, &r).unwrap();
            prop_assert!(check(&q, &s).is_ok(), "contracting {} in {p}", r.path);
        }
    }

    #[test]
    fn normal_skolem_proofs_keep_skolem_terms_frozen(seed in any::<u64>(), depth in 1usize..5) {
        let ctx = skolem_context();
        let sig = skolem_sig();
        let mut g = Gen::new(seed);
        let (p, a) = g.f_free_proof(&ctx, depth);
        let s = sequent(&ctx, a);
        let n = normalize(&p, &s.context).unwrap();
        prop_assert_eq!(validate_frozen_propagation(&n, &s, &sig).unwrap(), FrozenPropagation::Pass);
        prop_assert_eq!(assert_partial_positions(&n, &s, &sig).unwrap(), PartialPositions::Ok);
    }
}

#[test]
fn generator_produces_redexes() {
    let ctx = contexts()[1].clone();
    let mut g = Gen::new(7);
    let redexes: usize = (0..50)
        .map(|_| find_redexes(&g.proof(&ctx, 4).0).len())
        .sum();
    assert!(redexes > 50, "only {redexes} redexes");
}

#[test]
fn budget_is_reported() {
    let ctx = contexts()[0].clone();
    let mut g = Gen::new(11);
    let (p, a) = (0..)
        .map(|_| g.proof(&ctx, 4))
        .find(|(p, _)| find_redexes(p).len() >= 2)
        .unwrap();
    let s = sequent(&ctx, a);
    assert!(matches!(
        normalize_with_budget(&p, &s.context, 1),
        Err(NormalizeError::StepBudgetExceeded { .. })
    ));
}
