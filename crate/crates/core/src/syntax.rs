//! First-order terms and formulas, capture-avoiding substitution and
//! alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A first-order term. Constants are applications with no arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Variables and function symbols, i.e. every identifier a fresh
    /// variable name must avoid to print unambiguously.
    pub fn collect_idents(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_idents(out));
            }
        }
    }

    pub fn has_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::App(_, args) => args.iter().any(|a| a.has_var(x)),
        }
    }

    pub fn has_symbol(&self, f: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(g, args) => g == f || args.iter().any(|a| a.has_symbol(f)),
        }
    }

    /// True if `u` occurs as a subterm (including `self == u`).
    pub fn contains(&self, u: &Term) -> bool {
        self == u
            || match self {
                Term::Var(_) => false,
                Term::App(_, args) => args.iter().any(|a| a.contains(u)),
            }
    }

    pub fn subst(&self, s: &Subst) -> Term {
        match self {
            Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst(s)).collect()),
        }
    }

    /// Replaces every occurrence of `u` by `by`, outermost first.
    pub fn replace(&self, u: &Term, by: &Term) -> Term {
        if self == u {
            return by.clone();
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.replace(u, by)).collect())
            }
        }
    }

    pub fn for_each_subterm<'a>(&'a self, visit: &mut impl FnMut(&'a Term)) {
        visit(self);
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.for_each_subterm(visit));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(g, args) if args.is_empty() => f.write_str(g),
            Term::App(g, args) => {
                write!(f, "({g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A first-order formula. Negation is `A ⇒ ⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Absurd,
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(p: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(p.into(), args)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn negation(a: Formula) -> Formula {
        Formula::implies(a, Formula::Absurd)
    }

    /// `∀x1 … ∀xn body`.
    pub fn forall_many(vars: &[String], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, x| Formula::forall(x.clone(), acc))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Absurd => 1,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for a in args {
                    for v in a.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Absurd => {}
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                bound.push(x.clone());
                a.collect_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.has_var(x)),
            Formula::Absurd => false,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.has_free_var(x) || b.has_free_var(x)
            }
            Formula::Forall(y, a) | Formula::Exists(y, a) => y != x && a.has_free_var(x),
        }
    }

    /// Every identifier in the formula: free and bound variables and
    /// function symbols.
    pub fn collect_idents(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_idents(out)),
            Formula::Absurd => {}
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.collect_idents(out);
            }
        }
    }

    pub fn idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_idents(&mut out);
        out
    }

    pub fn has_symbol(&self, f: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.has_symbol(f)),
            Formula::Absurd => false,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.has_symbol(f) || b.has_symbol(f)
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.has_symbol(f),
        }
    }

    /// Syntactic occurrence of `u` anywhere, bound variables included.
    pub fn contains_term(&self, u: &Term) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.contains(u)),
            Formula::Absurd => false,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_term(u) || b.contains_term(u)
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.contains_term(u),
        }
    }

    /// Visits every term occurrence (maximal argument terms and all of
    /// their subterms) together with the variables bound at that position.
    pub fn for_each_term_occurrence<'a>(&'a self, visit: &mut impl FnMut(&'a Term, &[String])) {
        fn go<'a>(
            f: &'a Formula,
            bound: &mut Vec<String>,
            visit: &mut impl FnMut(&'a Term, &[String]),
        ) {
            match f {
                Formula::Atom(_, args) => {
                    for a in args {
                        a.for_each_subterm(&mut |t| visit(t, bound));
                    }
                }
                Formula::Absurd => {}
                Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, visit);
                    go(b, bound, visit);
                }
                Formula::Forall(x, a) | Formula::Exists(x, a) => {
                    bound.push(x.clone());
                    go(a, bound, visit);
                    bound.pop();
                }
            }
        }
        go(self, &mut Vec::new(), visit);
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst(&self, s: &Subst) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.subst(s)).collect())
            }
            Formula::Absurd => Formula::Absurd,
            Formula::Implies(a, b) => Formula::implies(a.subst(s), b.subst(s)),
            Formula::And(a, b) => Formula::and(a.subst(s), b.subst(s)),
            Formula::Or(a, b) => Formula::or(a.subst(s), b.subst(s)),
            Formula::Forall(x, a) => {
                let (x, a) = subst_under_binder(x, a, s);
                Formula::Forall(x, Box::new(a))
            }
            Formula::Exists(x, a) => {
                let (x, a) = subst_under_binder(x, a, s);
                Formula::Exists(x, Box::new(a))
            }
        }
    }

    /// `(t/x)self`.
    pub fn instantiate(&self, x: &str, t: &Term) -> Formula {
        self.subst(&Subst::single(x, t.clone()))
    }

    /// Replaces the occurrences of `u` that are frozen (none of its
    /// variables bound at the occurrence) by the variable `z`. Binders
    /// named `z` are renamed so the new occurrences stay free.
    pub fn replace_frozen(&self, u: &Term, z: &str) -> Formula {
        let by = Term::var(z);
        let uvars = u.vars();
        fn go(
            f: &Formula,
            u: &Term,
            by: &Term,
            z: &str,
            uvars: &BTreeSet<String>,
            bound: &mut Vec<String>,
        ) -> Formula {
            match f {
                Formula::Atom(p, args) => {
                    if bound.iter().any(|b| uvars.contains(b)) {
                        f.clone()
                    } else {
                        Formula::Atom(p.clone(), args.iter().map(|a| a.replace(u, by)).collect())
                    }
                }
                Formula::Absurd => Formula::Absurd,
                Formula::Implies(a, b) => {
                    Formula::implies(go(a, u, by, z, uvars, bound), go(b, u, by, z, uvars, bound))
                }
                Formula::And(a, b) => {
                    Formula::and(go(a, u, by, z, uvars, bound), go(b, u, by, z, uvars, bound))
                }
                Formula::Or(a, b) => {
                    Formula::or(go(a, u, by, z, uvars, bound), go(b, u, by, z, uvars, bound))
                }
                Formula::Forall(x, a) | Formula::Exists(x, a) => {
                    let (x, a) = if x == z && a.contains_term(u) {
                        let mut avoid = a.idents();
                        u.collect_idents(&mut avoid);
                        avoid.insert(z.to_string());
                        let fresh = fresh_var(&avoid);
                        let renamed = a.instantiate(x, &Term::var(fresh.clone()));
                        (fresh, renamed)
                    } else {
                        (x.clone(), (**a).clone())
                    };
                    bound.push(x.clone());
                    let body = go(&a, u, by, z, uvars, bound);
                    bound.pop();
                    if matches!(f, Formula::Forall(..)) {
                        Formula::forall(x, body)
                    } else {
                        Formula::exists(x, body)
                    }
                }
            }
        }
        go(self, u, &by, z, &uvars, &mut Vec::new())
    }

    /// Alpha-equivalence.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_formula(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

fn subst_under_binder(x: &str, body: &Formula, s: &Subst) -> (String, Formula) {
    let fv = body.free_vars();
    let mut inner: BTreeMap<String, Term> =
        s.0.iter()
            .filter(|(k, _)| k.as_str() != x && fv.contains(k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
    if inner.is_empty() {
        return (x.to_string(), body.clone());
    }
    if inner.values().any(|t| t.has_var(x)) {
        let mut avoid = body.idents();
        for (k, v) in &inner {
            avoid.insert(k.clone());
            v.collect_idents(&mut avoid);
        }
        let fresh = fresh_var(&avoid);
        inner.insert(x.to_string(), Term::var(fresh.clone()));
        (fresh, body.subst(&Subst(inner)))
    } else {
        (x.to_string(), body.subst(&Subst(inner)))
    }
}

fn lookup(env: &[String], x: &str) -> Option<usize> {
    env.iter().rposition(|y| y == x)
}

fn alpha_eq_term(a: &Term, b: &Term, la: &[String], lb: &[String]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (lookup(la, x), lookup(lb, y)) {
            (None, None) => x == y,
            (Some(i), Some(j)) => i == j,
            _ => false,
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, la, lb))
        }
        _ => false,
    }
}

fn alpha_eq_formula(a: &Formula, b: &Formula, la: &mut Vec<String>, lb: &mut Vec<String>) -> bool {
    use Formula::*;
    match (a, b) {
        (Atom(p, xs), Atom(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, la, lb))
        }
        (Absurd, Absurd) => true,
        (Implies(a1, a2), Implies(b1, b2))
        | (And(a1, a2), And(b1, b2))
        | (Or(a1, a2), Or(b1, b2)) => {
            alpha_eq_formula(a1, b1, la, lb) && alpha_eq_formula(a2, b2, la, lb)
        }
        (Forall(x, a1), Forall(y, b1)) | (Exists(x, a1), Exists(y, b1)) => {
            la.push(x.clone());
            lb.push(y.clone());
            let r = alpha_eq_formula(a1, b1, la, lb);
            la.pop();
            lb.pop();
            r
        }
        _ => false,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) => {
                write!(f, "(atom {p}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Absurd => f.write_str("false"),
            Formula::Implies(a, b) => write!(f, "(imp {a} {b})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Forall(x, a) => write!(f, "(forall {x} {a})"),
            Formula::Exists(x, a) => write!(f, "(exists {x} {a})"),
        }
    }
}

/// A finite map from variables to terms, applied simultaneously.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(BTreeMap<String, Term>);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn single(x: impl Into<String>, t: Term) -> Subst {
        let mut s = Subst::new();
        s.insert(x, t);
        s
    }

    /// Pairs `x_i ↦ t_i`. Panics if the lengths differ.
    pub fn zip(xs: &[String], ts: &[Term]) -> Subst {
        assert_eq!(xs.len(), ts.len(), "substitution arity mismatch");
        Subst(xs.iter().cloned().zip(ts.iter().cloned()).collect())
    }

    pub fn insert(&mut self, x: impl Into<String>, t: Term) {
        self.0.insert(x.into(), t);
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.0.iter()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        t.subst(self)
    }

    pub fn apply_formula(&self, f: &Formula) -> Formula {
        f.subst(self)
    }
}

/// Smallest `prefix{k}` not in `avoid`.
pub fn fresh_name(prefix: &str, avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|k| format!("{prefix}{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded name supply")
}

/// Fresh variable in the `z0, z1, …` scheme.
pub fn fresh_var(avoid: &BTreeSet<String>) -> String {
    fresh_name("z", avoid)
}

/// Orders terms largest first; ties broken by printed form. A proper
/// superterm always sorts before its subterms.
pub fn largest_first(a: &Term, b: &Term) -> std::cmp::Ordering {
    b.size()
        .cmp(&a.size())
        .then_with(|| a.to_string().cmp(&b.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }
    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn direct_replacement() {
        let p = Formula::atom("P", vec![v("x"), v("y")]);
        let r = p.instantiate("x", &c("c"));
        assert_eq!(r, Formula::atom("P", vec![c("c"), v("y")]));
    }

    #[test]
    fn substitution_avoids_capture() {
        let p = Formula::forall("y", Formula::atom("P", vec![v("x"), v("y")]));
        let r = p.instantiate("x", &v("y"));
        assert_eq!(r.to_string(), "(forall z0 (atom P y z0))");
        assert!(r.alpha_eq(&Formula::forall(
            "w",
            Formula::atom("P", vec![v("y"), v("w")])
        )));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let q = Formula::atom("Q", vec![v("x"), v("z")]);
        let mut s = Subst::new();
        s.insert("x", Term::app("g", vec![v("z")]));
        s.insert("z", c("c"));
        assert_eq!(q.subst(&s).to_string(), "(atom Q (g z) c)");
    }

    #[test]
    fn fresh_scheme() {
        let mut avoid = BTreeSet::new();
        assert_eq!(fresh_var(&avoid), "z0");
        avoid.insert("z0".to_string());
        assert_eq!(fresh_var(&avoid), "z1");
        for k in 0..10 {
            avoid.insert(format!("z{k}"));
        }
        assert_eq!(fresh_var(&avoid), "z10");
    }

    #[test]
    fn alpha_respects_binding_structure() {
        let a = Formula::forall(
            "x",
            Formula::forall("y", Formula::atom("R", vec![v("x"), v("y")])),
        );
        let b = Formula::forall(
            "y",
            Formula::forall("x", Formula::atom("R", vec![v("y"), v("x")])),
        );
        let c_ = Formula::forall(
            "y",
            Formula::forall("x", Formula::atom("R", vec![v("x"), v("y")])),
        );
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c_));
        // free vs bound
        let d = Formula::forall("x", Formula::atom("P", vec![v("y")]));
        let e = Formula::forall("y", Formula::atom("P", vec![v("y")]));
        assert!(!d.alpha_eq(&e));
    }

    #[test]
    fn replace_frozen_renames_clashing_binder() {
        let fc = Term::app("f", vec![c("c")]);
        let f = Formula::forall("z", Formula::atom("Q", vec![v("z"), fc.clone()]));
        let r = f.replace_frozen(&fc, "z");
        assert!(r.alpha_eq(&Formula::forall(
            "w",
            Formula::atom("Q", vec![v("w"), v("z")])
        )));
    }

    #[test]
    fn replace_frozen_skips_bound_occurrences() {
        let fx = Term::app("f", vec![v("x")]);
        let f = Formula::and(
            Formula::atom("P", vec![fx.clone()]),
            Formula::forall("x", Formula::atom("Q", vec![fx.clone()])),
        );
        let r = f.replace_frozen(&fx, "z");
        assert_eq!(r.to_string(), "(and (atom P z) (forall x (atom Q (f x))))");
    }

    #[test]
    fn largest_first_orders_superterms_first() {
        let fc = Term::app("f", vec![c("c")]);
        let ffc = Term::app("f", vec![fc.clone()]);
        let mut ts = vec![fc.clone(), ffc.clone()];
        ts.sort_by(largest_first);
        assert_eq!(ts, vec![ffc, fc]);
    }
}
