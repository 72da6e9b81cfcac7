//! Skolem signatures and the analysis of terms headed by the Skolem
//! symbol: collection, frozen occurrences, and instance classification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{largest_first, Formula, Subst, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("Skolem symbol `{0}` occurs in the body formula")]
    SymbolInBody(String),
    #[error("parameter list repeats variable `{0}`")]
    DuplicateParameter(String),
    #[error("witness variable `{0}` is also a parameter")]
    WitnessIsParameter(String),
    #[error("variable `{0}` is free in the body but is neither a parameter nor the witness")]
    StrayFreeVariable(String),
    #[error("witness variable `{0}` does not occur free in the body")]
    WitnessUnused(String),
}

/// The data `(f, A, x̄, y)` fixing which formulas count as partial or
/// total instances of the Skolem axiom `∀x̄ (f(x̄)/y)A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemSignature {
    symbol: String,
    body: Formula,
    params: Vec<String>,
    witness: String,
}

impl SkolemSignature {
    pub fn new(
        symbol: impl Into<String>,
        params: Vec<String>,
        witness: impl Into<String>,
        body: Formula,
    ) -> Result<Self, SignatureError> {
        let symbol = symbol.into();
        let witness = witness.into();
        if body.has_symbol(&symbol) {
            return Err(SignatureError::SymbolInBody(symbol));
        }
        let mut seen = BTreeSet::new();
        for x in &params {
            if !seen.insert(x.clone()) {
                return Err(SignatureError::DuplicateParameter(x.clone()));
            }
        }
        if seen.contains(&witness) {
            return Err(SignatureError::WitnessIsParameter(witness));
        }
        let fv = body.free_vars();
        if let Some(x) = fv.iter().find(|x| **x != witness && !seen.contains(*x)) {
            return Err(SignatureError::StrayFreeVariable(x.clone()));
        }
        if !fv.contains(&witness) {
            return Err(SignatureError::WitnessUnused(witness));
        }
        Ok(SkolemSignature {
            symbol,
            body,
            params,
            witness,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn witness(&self) -> &str {
        &self.witness
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// `f(ū)`.
    pub fn skolem_term(&self, args: &[Term]) -> Term {
        Term::app(self.symbol.clone(), args.to_vec())
    }

    /// `f(x̄)`.
    pub fn generic_term(&self) -> Term {
        let xs: Vec<Term> = self.params.iter().map(Term::var).collect();
        self.skolem_term(&xs)
    }

    /// `(f(x̄)/y)A`.
    pub fn skolemized_body(&self) -> Formula {
        self.body.instantiate(&self.witness, &self.generic_term())
    }

    /// `∀x̄ (f(x̄)/y)A`.
    pub fn skolem_axiom(&self) -> Formula {
        Formula::forall_many(&self.params, self.skolemized_body())
    }

    /// `∀x̄ ∃y A`.
    pub fn existential(&self) -> Formula {
        Formula::forall_many(
            &self.params,
            Formula::exists(self.witness.clone(), self.body.clone()),
        )
    }

    /// `(ū/x̄, f(ū)/y)A`.
    pub fn total_instance(&self, args: &[Term]) -> Formula {
        let mut s = Subst::zip(&self.params, args);
        s.insert(self.witness.clone(), self.skolem_term(args));
        self.body.subst(&s)
    }

    /// `(t1/x1, …, ti/xi) ∀x_{i+1} … ∀xn (f(x̄)/y)A`.
    pub fn partial_instance(&self, prefix: &[Term]) -> Formula {
        let i = prefix.len();
        assert!(i < self.arity(), "partial instance prefix too long");
        let rest = Formula::forall_many(&self.params[i..], self.skolemized_body());
        rest.subst(&Subst::zip(&self.params[..i], prefix))
    }

    /// If `f` is a Skolem term `f(ū)`, its arguments.
    pub fn skolem_args<'a>(&self, t: &'a Term) -> Option<&'a [Term]> {
        match t {
            Term::App(g, args) if *g == self.symbol && args.len() == self.arity() => Some(args),
            _ => None,
        }
    }
}

impl fmt::Display for SkolemSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (", self.symbol)?;
        for (k, x) in self.params.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(x)?;
        }
        write!(f, ") {} {}", self.witness, self.body)
    }
}

/// Classification of a formula relative to a Skolem signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceClass {
    /// `i` leading parameters instantiated, `0 ≤ i < n`.
    PartialInstance {
        prefix: Vec<Term>,
    },
    TotalInstance {
        args: Vec<Term>,
    },
    AllFrozen,
    HasUnfrozen,
}

impl InstanceClass {
    /// Total instances and formulas whose Skolem terms are all frozen.
    pub fn is_frozen(&self) -> bool {
        matches!(
            self,
            InstanceClass::TotalInstance { .. } | InstanceClass::AllFrozen
        )
    }

    pub fn is_partial(&self) -> bool {
        matches!(self, InstanceClass::PartialInstance { .. })
    }
}

/// Every distinct subterm headed by `f`, largest first (a superterm always
/// precedes its subterms).
pub fn f_terms_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>, f: &str) -> Vec<Term> {
    let mut found = BTreeSet::new();
    for formula in formulas {
        formula.for_each_term_occurrence(&mut |t, _| {
            if matches!(t, Term::App(g, _) if g == f) {
                found.insert(t.clone());
            }
        });
    }
    let mut out: Vec<Term> = found.into_iter().collect();
    out.sort_by(largest_first);
    out
}

/// Per-occurrence frozen report for a subterm within a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrozenReport {
    /// One entry per occurrence, in left-to-right order.
    pub occurrences: Vec<bool>,
}

impl FrozenReport {
    /// Vacuously true when there are no occurrences.
    pub fn all_frozen(&self) -> bool {
        self.occurrences.iter().all(|b| *b)
    }
}

pub fn is_frozen(u: &Term, c: &Formula) -> FrozenReport {
    let uvars = u.vars();
    let mut occurrences = Vec::new();
    c.for_each_term_occurrence(&mut |t, bound| {
        if t == u {
            occurrences.push(!bound.iter().any(|b| uvars.contains(b)));
        }
    });
    FrozenReport { occurrences }
}

/// True if every occurrence of every `f`-term of `c` is frozen.
pub fn all_f_terms_frozen(c: &Formula, f: &str) -> bool {
    let mut ok = true;
    c.for_each_term_occurrence(&mut |t, bound| {
        if ok && matches!(t, Term::App(g, _) if g == f) && bound.iter().any(|b| t.has_var(b)) {
            ok = false;
        }
    });
    ok
}

pub fn classify(c: &Formula, sig: &SkolemSignature) -> InstanceClass {
    let n = sig.arity();
    for i in 0..n {
        let pattern = Formula::forall_many(&sig.params[i..], sig.skolemized_body());
        if let Some(prefix) = match_instance(&pattern, c, &sig.params[..i]) {
            return InstanceClass::PartialInstance { prefix };
        }
    }
    if let Some(args) = match_instance(&sig.skolemized_body(), c, &sig.params) {
        return InstanceClass::TotalInstance { args };
    }
    if all_f_terms_frozen(c, sig.symbol()) {
        InstanceClass::AllFrozen
    } else {
        InstanceClass::HasUnfrozen
    }
}

/// Finds `t̄` with `(t̄/metas)pattern ≡α target`. Metavariables that the
/// pattern does not constrain are left as themselves.
fn match_instance(pattern: &Formula, target: &Formula, metas: &[String]) -> Option<Vec<Term>> {
    let mut m = Matcher {
        metas,
        bindings: BTreeMap::new(),
        pb: Vec::new(),
        tb: Vec::new(),
    };
    if !m.formula(pattern, target) {
        return None;
    }
    let args: Vec<Term> = metas
        .iter()
        .map(|x| {
            m.bindings
                .get(x)
                .cloned()
                .unwrap_or_else(|| Term::var(x.clone()))
        })
        .collect();
    // Confirm through the substitution itself; this also rules out the
    // unconstrained-metavariable corner cases.
    let inst = pattern.subst(&Subst::zip(metas, &args));
    inst.alpha_eq(target).then_some(args)
}

struct Matcher<'a> {
    metas: &'a [String],
    bindings: BTreeMap<String, Term>,
    pb: Vec<String>,
    tb: Vec<String>,
}

impl Matcher<'_> {
    fn term(&mut self, p: &Term, t: &Term) -> bool {
        match p {
            Term::Var(x) => match self.pb.iter().rposition(|b| b == x) {
                Some(i) => {
                    matches!(t, Term::Var(y) if self.tb.iter().rposition(|b| b == y) == Some(i))
                }
                None if self.metas.contains(x) => {
                    if self.tb.iter().any(|b| t.has_var(b)) {
                        return false;
                    }
                    match self.bindings.get(x) {
                        Some(prev) => prev == t,
                        None => {
                            self.bindings.insert(x.clone(), t.clone());
                            true
                        }
                    }
                }
                None => matches!(t, Term::Var(y) if y == x && !self.tb.contains(y)),
            },
            Term::App(f, ps) => match t {
                Term::App(g, ts) if f == g && ps.len() == ts.len() => {
                    ps.iter().zip(ts).all(|(p, t)| self.term(p, t))
                }
                _ => false,
            },
        }
    }

    fn formula(&mut self, p: &Formula, t: &Formula) -> bool {
        use Formula::*;
        match (p, t) {
            (Atom(a, ps), Atom(b, ts)) => {
                a == b && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| self.term(p, t))
            }
            (Absurd, Absurd) => true,
            (Implies(p1, p2), Implies(t1, t2))
            | (And(p1, p2), And(t1, t2))
            | (Or(p1, p2), Or(t1, t2)) => self.formula(p1, t1) && self.formula(p2, t2),
            (Forall(x, p1), Forall(y, t1)) | (Exists(x, p1), Exists(y, t1)) => {
                self.pb.push(x.clone());
                self.tb.push(y.clone());
                let r = self.formula(p1, t1);
                self.pb.pop();
                self.tb.pop();
                r
            }
            _ => false,
        }
    }
}
