//! Seeded random proofs over a few fixed contexts. Every generated proof
//! checks by construction; most contain detours and permutative redexes.
#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use deskolem::document::{self, Document};
use deskolem::kernel::{infer, Context, Proof, Sequent};
use deskolem::{Formula, SkolemSignature, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(n: &str) -> Term {
    Term::constant(n)
}
pub fn v(n: &str) -> Term {
    Term::var(n)
}
pub fn atom0(p: &str) -> Formula {
    Formula::atom(p, vec![])
}
pub fn p1(t: Term) -> Formula {
    Formula::atom("P", vec![t])
}
pub fn r2(a: Term, b: Term) -> Formula {
    Formula::atom("R", vec![a, b])
}
pub fn f(t: Term) -> Term {
    Term::app("f", vec![t])
}

pub fn ctx(entries: &[(&str, Formula)]) -> Context {
    Context::from_entries(
        entries
            .iter()
            .map(|(l, f)| (l.to_string(), f.clone()))
            .collect(),
    )
    .unwrap()
}

/// `f (x) y R(x, y)`.
pub fn skolem_sig() -> SkolemSignature {
    SkolemSignature::new("f", vec!["x".into()], "y", r2(v("x"), v("y"))).unwrap()
}

fn base_entries() -> Vec<(&'static str, Formula)> {
    let (a, b) = (atom0("A"), atom0("B"));
    vec![
        ("a", a.clone()),
        ("ab", Formula::implies(a.clone(), b.clone())),
        ("all", Formula::forall("x", p1(v("x")))),
        ("ex", Formula::exists("x", p1(v("x")))),
        ("or", Formula::or(a.clone(), b.clone())),
        ("conj", Formula::and(a, b)),
    ]
}

/// The fixed contexts. The last one holds the Skolem axiom `s`.
pub fn contexts() -> Vec<Context> {
    let base = base_entries();
    let mut with_bot = base.clone();
    with_bot.push(("bot", Formula::Absurd));
    let mut skolem = base.clone();
    skolem.push(("ax", skolem_sig().existential()));
    skolem.push(("s", skolem_sig().skolem_axiom()));
    vec![ctx(&base), ctx(&with_bot), ctx(&skolem)]
}

pub fn skolem_context() -> Context {
    contexts().pop().unwrap()
}

pub struct Gen {
    rng: ChaCha8Rng,
    next: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            next: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn label(&mut self) -> String {
        self.next += 1;
        format!("g{}", self.next)
    }

    fn var(&mut self) -> String {
        self.next += 1;
        format!("v{}", self.next)
    }

    fn constant(&mut self) -> Term {
        c(["c", "d"].choose(&mut self.rng).unwrap())
    }

    pub fn formula(&mut self, depth: usize) -> Formula {
        let k = if depth == 0 {
            self.rng.gen_range(0..3)
        } else {
            self.rng.gen_range(0..6)
        };
        match k {
            0 => atom0(["A", "B"].choose(&mut self.rng).unwrap()),
            1 => {
                let t = self.constant();
                p1(t)
            }
            2 => Formula::Absurd,
            3 => Formula::implies(self.formula(depth - 1), self.formula(depth - 1)),
            4 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            _ => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
        }
    }

    /// A hypothesis or an instance of a universal hypothesis.
    fn leaf(&mut self, ctx: &Context) -> Proof {
        let labels: Vec<String> = ctx.labels().map(str::to_string).collect();
        let l = labels.choose(&mut self.rng).unwrap().clone();
        match ctx.get(&l).unwrap() {
            Formula::Forall(..) if self.rng.gen_bool(0.6) => {
                let t = self.constant();
                Proof::forall_elim(t, Proof::hyp(l))
            }
            _ => Proof::hyp(l),
        }
    }

    /// A checked proof in `ctx` together with its conclusion.
    pub fn proof(&mut self, ctx: &Context, depth: usize) -> (Proof, Formula) {
        let p = self.build(ctx, depth);
        let f = infer(&p, ctx).unwrap_or_else(|e| panic!("generator produced {p}: {e}"));
        (p, f)
    }

    fn sub(&mut self, ctx: &Context, depth: usize) -> (Proof, Formula) {
        self.proof(ctx, depth)
    }

    fn build(&mut self, ctx: &Context, depth: usize) -> Proof {
        if depth == 0 {
            return self.leaf(ctx);
        }
        let d = depth - 1;
        let skolem = ctx.contains_label("s");
        match self.rng.gen_range(0..14) {
            0 => self.leaf(ctx),
            1 => Proof::and_intro(self.sub(ctx, d).0, self.sub(ctx, d).0),
            2 => {
                let (p, _) = self.sub(ctx, d);
                let (q, _) = self.sub(ctx, d);
                if self.rng.gen_bool(0.5) {
                    Proof::and_elim_l(Proof::and_intro(p, q))
                } else {
                    Proof::and_elim_r(Proof::and_intro(p, q))
                }
            }
            3 => {
                let (arg, a) = self.sub(ctx, d);
                let h = self.label();
                let inner = ctx.with(&h, a.clone()).unwrap();
                let (body, _) = self.sub(&inner, d);
                let body = if self.rng.gen_bool(0.5) {
                    Proof::and_elim_l(Proof::and_intro(body, Proof::hyp(&h)))
                } else {
                    body
                };
                Proof::imp_elim(Proof::imp_intro(h, a, body), arg)
            }
            4 => {
                let a = self.formula(1);
                let h = self.label();
                let inner = ctx.with(&h, a.clone()).unwrap();
                let (body, _) = self.sub(&inner, d);
                Proof::imp_intro(h, a, body)
            }
            5 => {
                let (p, _) = self.sub(ctx, d);
                let (q, _) = self.sub(ctx, d);
                let other = self.formula(1);
                let (h1, h2) = (self.label(), self.label());
                let major = if self.rng.gen_bool(0.5) {
                    Proof::or_intro_l(other, p)
                } else {
                    Proof::or_intro_r(other, p)
                };
                Proof::or_elim(major, h1, q.clone(), h2, q)
            }
            6 => {
                let z = self.var();
                let src = if skolem && self.rng.gen_bool(0.5) {
                    "s"
                } else {
                    "all"
                };
                let inst = Proof::forall_elim(v(&z), Proof::hyp(src));
                let body = if self.rng.gen_bool(0.5) {
                    let (q, _) = self.sub(ctx, d);
                    Proof::and_intro(inst, q)
                } else {
                    inst
                };
                let t = self.constant();
                Proof::forall_elim(t, Proof::forall_intro(z, body))
            }
            7 => {
                let (p, _) = self.sub(ctx, d);
                let t = self.constant();
                let (z, h) = (self.var(), self.label());
                let major = Proof::exists_intro(
                    t.clone(),
                    Formula::exists("x", p1(v("x"))),
                    Proof::forall_elim(t, Proof::hyp("all")),
                );
                Proof::exists_elim(
                    major,
                    z,
                    h.clone(),
                    Proof::and_elim_l(Proof::and_intro(p, Proof::hyp(h))),
                )
            }
            8 => {
                let (q, _) = self.sub(ctx, d);
                let (h1, h2) = (self.label(), self.label());
                let branch = Proof::and_intro(q, Proof::hyp("a"));
                Proof::and_elim_l(Proof::or_elim(
                    Proof::hyp("or"),
                    h1,
                    branch.clone(),
                    h2,
                    branch,
                ))
            }
            9 => {
                let (q, _) = self.sub(ctx, d);
                let (z, h) = (self.var(), self.label());
                let body = Proof::and_intro(q, Proof::hyp("a"));
                Proof::and_elim_l(Proof::exists_elim(Proof::hyp("ex"), z, h, body))
            }
            10 => {
                let (z, h) = (self.var(), self.label());
                Proof::imp_elim(
                    Proof::exists_elim(Proof::hyp("ex"), z, h, Proof::hyp("ab")),
                    Proof::hyp("a"),
                )
            }
            11 if ctx.contains_label("bot") => {
                let (_, a) = self.sub(ctx, d);
                let target = Formula::and(a.clone(), a);
                Proof::and_elim_r(Proof::absurd_elim(target, Proof::hyp("bot")))
            }
            12 if skolem => {
                let t = self.constant();
                let t = if self.rng.gen_bool(0.3) { f(t) } else { t };
                let target = skolem_sig().existential_at(&t);
                Proof::exists_intro(f(t.clone()), target, Proof::forall_elim(t, Proof::hyp("s")))
            }
            13 if skolem => {
                let z = self.var();
                let target = skolem_sig().existential_at(&v(&z));
                Proof::forall_intro(
                    z.clone(),
                    Proof::exists_intro(
                        f(v(&z)),
                        target,
                        Proof::forall_elim(v(&z), Proof::hyp("s")),
                    ),
                )
            }
            _ => Proof::and_elim_r(Proof::and_intro(self.leaf(ctx), self.sub(ctx, d).0)),
        }
    }

    /// A proof from `ctx` whose conclusion does not mention `f`.
    pub fn f_free_proof(&mut self, ctx: &Context, depth: usize) -> (Proof, Formula) {
        loop {
            let (p, a) = self.proof(ctx, depth);
            if !a.has_symbol("f") {
                return (p, a);
            }
        }
    }
}

pub trait ExistentialAt {
    fn existential_at(&self, t: &Term) -> Formula;
}

impl ExistentialAt for SkolemSignature {
    /// `∃y (t/x)A` for a unary signature.
    fn existential_at(&self, t: &Term) -> Formula {
        Formula::exists(
            self.witness(),
            self.body().instantiate(&self.params()[0], t),
        )
    }
}

pub fn sequent(ctx: &Context, goal: Formula) -> Sequent {
    Sequent::new(ctx.clone(), goal)
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus() -> Vec<(String, Document)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "nd"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            let doc = document::parse(&text)
                .unwrap_or_else(|d| panic!("{}", d.render(&p.display().to_string())));
            (p.file_name().unwrap().to_string_lossy().into_owned(), doc)
        })
        .collect()
}

/// The base context extended with total instances of the Skolem axiom.
pub fn instance_context() -> Context {
    let mut entries = base_entries();
    entries.push(("ax", skolem_sig().existential()));
    entries.push(("k1", r2(c("c"), f(c("c")))));
    entries.push(("k2", r2(c("d"), f(c("d")))));
    entries.push(("k3", r2(f(c("c")), f(f(c("c"))))));
    ctx(&entries)
}

/// `ax ⊢ ∀x∃y R(x, y)` proved by its hypothesis.
pub fn axiom_proof() -> (Proof, Sequent) {
    (
        Proof::hyp("ax"),
        Sequent::new(
            ctx(&[("ax", skolem_sig().existential())]),
            skolem_sig().existential(),
        ),
    )
}
