//! A small bounded prover used to confirm sequents independently of the
//! deskolemization procedure.
//!
//! The search is a focused sequent calculus read backwards with proof
//! terms attached to every hypothesis. Invertible rules run eagerly and
//! cost nothing; every other rule spends one unit of depth. Quantifier
//! instances range over a finite universe: the free variables and
//! eigenvariables in scope, plus at most `max_terms` constants and one-layer
//! applications over the terms in scope. Depth is deepened iteratively.

use std::collections::{BTreeMap, BTreeSet};

use crate::kernel::{check, Proof, Sequent};
use crate::syntax::{fresh_name, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_terms: usize,
}

impl SearchBudget {
    /// `None` unless both bounds are positive.
    pub fn new(max_depth: usize, max_terms: usize) -> Option<SearchBudget> {
        (max_depth > 0 && max_terms > 0).then_some(SearchBudget {
            max_depth,
            max_terms,
        })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 7,
            max_terms: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Provable(Proof),
    Unknown,
}

impl Outcome {
    pub fn is_provable(&self) -> bool {
        matches!(self, Outcome::Provable(_))
    }
}

/// Node visits allowed per deepening round.
const STEP_CAP: usize = 200_000;

/// Returns `Provable` only with a proof that passes the kernel.
pub fn prove(s: &Sequent, budget: SearchBudget) -> Outcome {
    let mut used: BTreeSet<String> = s.context.idents();
    used.extend(s.conclusion.idents());
    used.extend(s.context.labels().map(str::to_string));
    let mut funs = BTreeMap::new();
    let mut base = BTreeSet::new();
    for f in s.context.formulas().chain([&s.conclusion]) {
        f.for_each_term_occurrence(&mut |t, bound| match t {
            Term::App(g, args) if args.is_empty() => {
                base.insert(t.clone());
                funs.insert(g.clone(), 0);
            }
            Term::App(g, args) => {
                funs.insert(g.clone(), args.len());
            }
            Term::Var(x) if !bound.contains(x) => {
                base.insert(t.clone());
            }
            Term::Var(_) => {}
        });
    }
    let facts: Vec<(Formula, Proof)> = s
        .context
        .iter()
        .map(|(l, f)| (f.clone(), Proof::hyp(l.to_string())))
        .collect();
    for depth in 0..=budget.max_depth {
        let mut search = Search {
            used: used.clone(),
            funs: &funs,
            max_terms: budget.max_terms,
            steps: 0,
        };
        let scope: Vec<Term> = base.iter().cloned().collect();
        if let Some(p) = search.left(&[], facts.clone(), &s.conclusion, depth, &scope) {
            if check(&p, s).is_ok() {
                return Outcome::Provable(p);
            }
        }
    }
    Outcome::Unknown
}

struct Search<'a> {
    used: BTreeSet<String>,
    funs: &'a BTreeMap<String, usize>,
    max_terms: usize,
    steps: usize,
}

impl Search<'_> {
    fn fresh(&mut self, prefix: &str) -> String {
        let n = fresh_name(prefix, &self.used);
        self.used.insert(n.clone());
        n
    }

    /// Variables in scope are always available; constants and applied
    /// terms count against `max_terms`.
    fn universe(&self, scope: &[Term]) -> Vec<Term> {
        let (mut out, mut counted): (Vec<Term>, Vec<Term>) = scope
            .iter()
            .cloned()
            .partition(|t| matches!(t, Term::Var(_)));
        for (g, &n) in self.funs {
            if n == 0 {
                continue;
            }
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..n {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        scope.iter().map(move |a| {
                            let mut t = t.clone();
                            t.push(a.clone());
                            t
                        })
                    })
                    .collect();
            }
            counted.extend(tuples.into_iter().map(|args| Term::app(g.clone(), args)));
        }
        counted.truncate(self.max_terms);
        out.extend(counted);
        out
    }

    /// Decomposes `pending` hypotheses with the invertible left rules, then
    /// continues with the goal.
    fn left(
        &mut self,
        facts: &[(Formula, Proof)],
        mut pending: Vec<(Formula, Proof)>,
        goal: &Formula,
        depth: usize,
        scope: &[Term],
    ) -> Option<Proof> {
        let Some((f, p)) = pending.pop() else {
            return self.right(facts, goal, depth, scope);
        };
        match f {
            Formula::And(a, b) => {
                pending.push((*a, Proof::and_elim_l(p.clone())));
                pending.push((*b, Proof::and_elim_r(p)));
                self.left(facts, pending, goal, depth, scope)
            }
            Formula::Absurd => Some(Proof::absurd_elim(goal.clone(), p)),
            Formula::Exists(x, body) => {
                let z = self.fresh("z");
                let h = self.fresh("h");
                pending.push((body.instantiate(&x, &Term::var(&z)), Proof::hyp(&h)));
                let mut scope = scope.to_vec();
                scope.push(Term::var(&z));
                let minor = self.left(facts, pending, goal, depth, &scope)?;
                Some(Proof::exists_elim(p, z, h, minor))
            }
            Formula::Or(a, b) => {
                let h1 = self.fresh("h");
                let h2 = self.fresh("h");
                let mut left_pending = pending.clone();
                left_pending.push((*a, Proof::hyp(&h1)));
                let l = self.left(facts, left_pending, goal, depth, scope)?;
                pending.push((*b, Proof::hyp(&h2)));
                let r = self.left(facts, pending, goal, depth, scope)?;
                Some(Proof::or_elim(p, h1, l, h2, r))
            }
            f => {
                if facts.iter().any(|(g, _)| g.alpha_eq(&f)) {
                    return self.left(facts, pending, goal, depth, scope);
                }
                let mut facts = facts.to_vec();
                facts.push((f, p));
                self.left(&facts, pending, goal, depth, scope)
            }
        }
    }

    fn right(
        &mut self,
        facts: &[(Formula, Proof)],
        goal: &Formula,
        depth: usize,
        scope: &[Term],
    ) -> Option<Proof> {
        self.steps += 1;
        if self.steps > STEP_CAP {
            return None;
        }
        if let Some((_, p)) = facts.iter().find(|(f, _)| f.alpha_eq(goal)) {
            return Some(p.clone());
        }
        match goal {
            Formula::Implies(a, b) => {
                let h = self.fresh("h");
                let body = self.left(
                    facts,
                    vec![((**a).clone(), Proof::hyp(&h))],
                    b,
                    depth,
                    scope,
                )?;
                return Some(Proof::imp_intro(h, (**a).clone(), body));
            }
            Formula::And(a, b) => {
                let l = self.right(facts, a, depth, scope)?;
                let r = self.right(facts, b, depth, scope)?;
                return Some(Proof::and_intro(l, r));
            }
            Formula::Forall(x, body) => {
                let z = self.fresh("z");
                let mut scope = scope.to_vec();
                scope.push(Term::var(&z));
                let p = self.right(facts, &body.instantiate(x, &Term::var(&z)), depth, &scope)?;
                return Some(Proof::forall_intro(z, p));
            }
            _ => {}
        }
        if depth == 0 {
            return None;
        }
        let d = depth - 1;
        match goal {
            Formula::Or(a, b) => {
                if let Some(p) = self.right(facts, a, d, scope) {
                    return Some(Proof::or_intro_l((**b).clone(), p));
                }
                if let Some(p) = self.right(facts, b, d, scope) {
                    return Some(Proof::or_intro_r((**a).clone(), p));
                }
            }
            Formula::Exists(x, body) => {
                for t in self.universe(scope) {
                    if let Some(p) = self.right(facts, &body.instantiate(x, &t), d, scope) {
                        return Some(Proof::exists_intro(t, goal.clone(), p));
                    }
                }
            }
            _ => {}
        }
        for (f, p) in facts {
            match f {
                Formula::Implies(a, b) => {
                    if facts.iter().any(|(g, _)| g.alpha_eq(b)) {
                        continue;
                    }
                    let Some(q) = self.right(facts, a, d, scope) else {
                        continue;
                    };
                    let fact = ((**b).clone(), Proof::imp_elim(p.clone(), q));
                    if let Some(r) = self.left(facts, vec![fact], goal, d, scope) {
                        return Some(r);
                    }
                }
                Formula::Forall(x, body) => {
                    for t in self.universe(scope) {
                        let inst = body.instantiate(x, &t);
                        if facts.iter().any(|(g, _)| g.alpha_eq(&inst)) {
                            continue;
                        }
                        let fact = (inst, Proof::forall_elim(t, p.clone()));
                        if let Some(r) = self.left(facts, vec![fact], goal, d, scope) {
                            return Some(r);
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }
}
