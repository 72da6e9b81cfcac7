mod common;

use common::*;
use deskolem::document::{parse, print, Document, Item};
use deskolem::kernel::Sequent;
use proptest::prelude::*;

fn declarations() -> Vec<Item> {
    let fun = |n: &str, a| Item::Fun {
        name: n.into(),
        arity: a,
    };
    let pred = |n: &str, a| Item::Pred {
        name: n.into(),
        arity: a,
    };
    vec![
        fun("c", 0),
        fun("d", 0),
        fun("f", 1),
        pred("A", 0),
        pred("B", 0),
        pred("P", 1),
        pred("R", 2),
    ]
}

#[test]
fn corpus_round_trips() {
    for (name, doc) in corpus() {
        let text = print(&doc);
        assert_eq!(parse(&text).unwrap(), doc, "{name}");
        assert_eq!(print(&parse(&text).unwrap()), text, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>(), which in 0usize..3, depth in 1usize..5) {
        let ctx = contexts()[which].clone();
        let mut g = Gen::new(seed);
        let (p, a) = g.proof(&ctx, depth);
        let mut doc = Document { items: declarations() };
        doc.push(Item::Formula { name: "goal".into(), formula: a.clone() });
        doc.push(Item::Sequent { name: "main".into(), sequent: Sequent::new(ctx, a) });
        doc.push(Item::Proof { name: "main".into(), proof: p });
        doc.push(Item::Skolem { name: "sk".into(), sig: skolem_sig() });
        prop_assert_eq!(parse(&print(&doc)).unwrap(), doc);
    }
}

#[test]
fn diagnostics_carry_positions() {
    let err = parse("(pred P 1)\n(formula a\n  (atom P x y))").unwrap_err();
    assert_eq!(
        err.render("t.nd"),
        "t.nd:3:3: arity: `P` expects 1 arguments, found 2"
    );
    let err = parse("(pred P 1)\n(proof p (hyp h) extra)").unwrap_err();
    assert_eq!((err.pos.line, err.pos.col, err.code), (2, 1, "syntax"));
}
