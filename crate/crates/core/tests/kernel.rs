mod common;

use common::*;
use deskolem::kernel::{check, judgements, KernelErrorKind, NodePath, Proof};
use deskolem::Formula;
use proptest::prelude::*;

fn hyp_paths(p: &Proof, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let Proof::Hyp(_) = p {
        out.push(path.clone());
    }
    for (i, c) in p.children().into_iter().enumerate() {
        path.push(i);
        hyp_paths(c, path, out);
        path.pop();
    }
}

fn rename_hyp(p: &Proof, path: &[usize], to: &str) -> Proof {
    match path.split_first() {
        None => Proof::hyp(to),
        Some((&i, rest)) => {
            let mut q = p.clone();
            let slot = q.children_mut().into_iter().nth(i).unwrap();
            *slot = rename_hyp(slot, rest, to);
            q
        }
    }
}

#[test]
fn corpus_proofs_check() {
    for (name, doc) in corpus() {
        for which in ["pia", "main"] {
            check(doc.proof(which).unwrap(), doc.sequent(which).unwrap())
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unknown_labels_are_located(seed in any::<u64>(), depth in 1usize..5, pick in any::<prop::sample::Index>()) {
        let ctx = contexts()[0].clone();
        let mut g = Gen::new(seed);
        let (p, a) = g.proof(&ctx, depth);
        let mut paths = Vec::new();
        hyp_paths(&p, &mut Vec::new(), &mut paths);
        let path = pick.get(&paths).clone();
        let broken = rename_hyp(&p, &path, "missing");
        let err = check(&broken, &sequent(&ctx, a)).unwrap_err();
        prop_assert_eq!(err.path, NodePath(path));
        prop_assert!(matches!(err.kind, KernelErrorKind::UnknownLabel(_)));
    }

    #[test]
    fn judgements_cover_every_node(seed in any::<u64>(), depth in 1usize..5) {
        let ctx = contexts()[1].clone();
        let mut g = Gen::new(seed);
        let (p, a) = g.proof(&ctx, depth);
        let js = judgements(&p, &ctx).unwrap();
        prop_assert_eq!(js.len(), p.size());
        prop_assert!(js[0].conclusion.alpha_eq(&a));
    }
}

#[test]
fn conclusions_compare_up_to_bound_names() {
    let ctx = contexts()[0].clone();
    let p = Proof::forall_intro("u", Proof::forall_elim(v("u"), Proof::hyp("all")));
    check(&p, &sequent(&ctx, Formula::forall("w", p1(v("w"))))).unwrap();
    assert!(check(&p, &sequent(&ctx, Formula::exists("w", p1(v("w"))))).is_err());
}

#[test]
fn forall_intro_rejects_free_eigenvariable() {
    let ctx = ctx(&[("h", p1(v("u")))]);
    let p = Proof::forall_intro("u", Proof::hyp("h"));
    let err = check(&p, &sequent(&ctx, Formula::forall("u", p1(v("u"))))).unwrap_err();
    assert_eq!(err.path, NodePath(vec![]));
    assert!(matches!(
        err.kind,
        KernelErrorKind::EigenvariableViolation { .. }
    ));
}
