mod common;

use common::*;
use deskolem::kernel::{check, Sequent};
use deskolem::oracle::{prove, Outcome, SearchBudget};
use deskolem::Formula;
use proptest::prelude::*;

#[test]
fn identity_at_depth_three() {
    let s = sequent(&ctx(&[]), Formula::implies(p1(c("c")), p1(c("c"))));
    assert!(prove(&s, SearchBudget::new(3, 1).unwrap()).is_provable());
}

#[test]
fn worked_instance_at_depth_five() {
    let ax = Formula::forall("x", Formula::exists("y", r2(v("x"), v("y"))));
    let s = sequent(
        &ctx(&[("ax", ax)]),
        Formula::exists("y", r2(c("c"), v("y"))),
    );
    match prove(&s, SearchBudget::new(5, 1).unwrap()) {
        Outcome::Provable(p) => check(&p, &s).unwrap(),
        Outcome::Unknown => panic!("not found"),
    }
}

#[test]
fn excluded_middle_stays_unknown() {
    let a = p1(c("c"));
    let s = sequent(&ctx(&[]), Formula::or(a.clone(), Formula::negation(a)));
    for depth in 1..=7 {
        assert_eq!(
            prove(&s, SearchBudget::new(depth, 8).unwrap()),
            Outcome::Unknown
        );
    }
}

#[test]
fn budgets_are_positive() {
    assert!(SearchBudget::new(0, 3).is_none());
    assert!(SearchBudget::new(3, 0).is_none());
}

#[test]
fn agrees_with_every_corpus_instance() {
    for (name, doc) in corpus() {
        let sig = doc.skolem("sk").unwrap();
        let s = doc.sequent("main").unwrap();
        let label = s.context.find_formula(&sig.skolem_axiom()).unwrap();
        let target = Sequent::new(s.context.without(label), s.conclusion.clone());
        assert!(
            prove(&target, SearchBudget::default()).is_provable(),
            "{name}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn found_proofs_check(seed in any::<u64>(), which in 0usize..2) {
        let ctx = contexts()[which].clone();
        let mut g = Gen::new(seed);
        let goal = g.formula(2);
        let s = sequent(&ctx, goal);
        if let Outcome::Provable(p) = prove(&s, SearchBudget::new(4, 6).unwrap()) {
            prop_assert!(check(&p, &s).is_ok());
        }
    }
}
