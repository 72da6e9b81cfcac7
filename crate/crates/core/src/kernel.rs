//! Proof objects for intuitionistic first-order natural deduction and the
//! checker that enforces every rule's side conditions.
//!
//! Hypotheses are discharged by explicit label. A proof does not carry its
//! open context: it is checked against a [`Sequent`], whose context binds
//! the labels of the open hypotheses. Discharging a label that is already
//! in scope is rejected, so labels never shadow.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, Term};

/// Ordered labelled hypotheses with distinct labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Formula)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Fails on the first repeated label.
    pub fn from_entries(entries: Vec<(String, Formula)>) -> Result<Context, String> {
        let mut ctx = Context::new();
        for (l, f) in entries {
            if ctx.contains_label(&l) {
                return Err(l);
            }
            ctx.entries.push((l, f));
        }
        Ok(ctx)
    }

    pub fn get(&self, label: &str) -> Option<&Formula> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, f)| f)
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.entries.iter().any(|(l, _)| l == label)
    }

    /// First label whose formula is alpha-equivalent to `f`.
    pub fn find_formula(&self, f: &Formula) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, g)| g.alpha_eq(f))
            .map(|(l, _)| l.as_str())
    }

    /// Appends an entry. Returns false (and does nothing) on a label clash.
    pub fn push(&mut self, label: impl Into<String>, f: Formula) -> bool {
        let label = label.into();
        if self.contains_label(&label) {
            return false;
        }
        self.entries.push((label, f));
        true
    }

    pub fn with(&self, label: impl Into<String>, f: Formula) -> Option<Context> {
        let mut c = self.clone();
        c.push(label, f).then_some(c)
    }

    pub fn without(&self, label: &str) -> Context {
        Context {
            entries: self
                .entries
                .iter()
                .filter(|(l, _)| l != label)
                .cloned()
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.entries.iter().map(|(l, f)| (l.as_str(), f))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|(_, f)| f)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        self.formulas().any(|f| f.has_free_var(x))
    }

    pub fn idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            f.collect_idents(&mut out);
        }
        out
    }

    /// Same labels in the same order, formulas up to alpha.
    pub fn alpha_eq(&self, other: &Context) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((l1, f1), (l2, f2))| l1 == l2 && f1.alpha_eq(f2))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub context: Context,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(context: Context, conclusion: Formula) -> Sequent {
        Sequent {
            context,
            conclusion,
        }
    }

    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        self.context.alpha_eq(&other.context) && self.conclusion.alpha_eq(&other.conclusion)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(seq (")?;
        for (k, (l, h)) in self.context.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({l} {h})")?;
        }
        write!(f, ") {})", self.conclusion)
    }
}

/// A natural-deduction derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    Hyp(String),
    ImpIntro {
        label: String,
        hyp: Formula,
        body: Box<Proof>,
    },
    ImpElim {
        major: Box<Proof>,
        minor: Box<Proof>,
    },
    AndIntro(Box<Proof>, Box<Proof>),
    AndElimL(Box<Proof>),
    AndElimR(Box<Proof>),
    /// Proves `A ∨ other` from a proof of `A`.
    OrIntroL {
        other: Formula,
        proof: Box<Proof>,
    },
    /// Proves `other ∨ B` from a proof of `B`.
    OrIntroR {
        other: Formula,
        proof: Box<Proof>,
    },
    OrElim {
        major: Box<Proof>,
        left_label: String,
        left: Box<Proof>,
        right_label: String,
        right: Box<Proof>,
    },
    ForallIntro {
        var: String,
        body: Box<Proof>,
    },
    ForallElim {
        witness: Term,
        proof: Box<Proof>,
    },
    /// `target` is the proved `∃x A`; `proof` derives `(witness/x)A`.
    ExistsIntro {
        witness: Term,
        target: Formula,
        proof: Box<Proof>,
    },
    ExistsElim {
        major: Box<Proof>,
        var: String,
        label: String,
        minor: Box<Proof>,
    },
    AbsurdElim {
        target: Formula,
        proof: Box<Proof>,
    },
}

impl Proof {
    pub fn hyp(l: impl Into<String>) -> Proof {
        Proof::Hyp(l.into())
    }

    pub fn imp_intro(label: impl Into<String>, hyp: Formula, body: Proof) -> Proof {
        Proof::ImpIntro {
            label: label.into(),
            hyp,
            body: Box::new(body),
        }
    }

    pub fn imp_elim(major: Proof, minor: Proof) -> Proof {
        Proof::ImpElim {
            major: Box::new(major),
            minor: Box::new(minor),
        }
    }

    pub fn and_intro(l: Proof, r: Proof) -> Proof {
        Proof::AndIntro(Box::new(l), Box::new(r))
    }

    pub fn and_elim_l(p: Proof) -> Proof {
        Proof::AndElimL(Box::new(p))
    }

    pub fn and_elim_r(p: Proof) -> Proof {
        Proof::AndElimR(Box::new(p))
    }

    pub fn or_intro_l(other: Formula, p: Proof) -> Proof {
        Proof::OrIntroL {
            other,
            proof: Box::new(p),
        }
    }

    pub fn or_intro_r(other: Formula, p: Proof) -> Proof {
        Proof::OrIntroR {
            other,
            proof: Box::new(p),
        }
    }

    pub fn or_elim(
        major: Proof,
        ll: impl Into<String>,
        left: Proof,
        rl: impl Into<String>,
        right: Proof,
    ) -> Proof {
        Proof::OrElim {
            major: Box::new(major),
            left_label: ll.into(),
            left: Box::new(left),
            right_label: rl.into(),
            right: Box::new(right),
        }
    }

    pub fn forall_intro(var: impl Into<String>, body: Proof) -> Proof {
        Proof::ForallIntro {
            var: var.into(),
            body: Box::new(body),
        }
    }

    pub fn forall_elim(witness: Term, p: Proof) -> Proof {
        Proof::ForallElim {
            witness,
            proof: Box::new(p),
        }
    }

    pub fn exists_intro(witness: Term, target: Formula, p: Proof) -> Proof {
        Proof::ExistsIntro {
            witness,
            target,
            proof: Box::new(p),
        }
    }

    pub fn exists_elim(
        major: Proof,
        var: impl Into<String>,
        label: impl Into<String>,
        minor: Proof,
    ) -> Proof {
        Proof::ExistsElim {
            major: Box::new(major),
            var: var.into(),
            label: label.into(),
            minor: Box::new(minor),
        }
    }

    pub fn absurd_elim(target: Formula, p: Proof) -> Proof {
        Proof::AbsurdElim {
            target,
            proof: Box::new(p),
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            Proof::Hyp(_) => "hyp",
            Proof::ImpIntro { .. } => "imp-i",
            Proof::ImpElim { .. } => "imp-e",
            Proof::AndIntro(..) => "and-i",
            Proof::AndElimL(_) => "and-el",
            Proof::AndElimR(_) => "and-er",
            Proof::OrIntroL { .. } => "or-il",
            Proof::OrIntroR { .. } => "or-ir",
            Proof::OrElim { .. } => "or-e",
            Proof::ForallIntro { .. } => "forall-i",
            Proof::ForallElim { .. } => "forall-e",
            Proof::ExistsIntro { .. } => "exists-i",
            Proof::ExistsElim { .. } => "exists-e",
            Proof::AbsurdElim { .. } => "false-e",
        }
    }

    /// Immediate subproofs in path order.
    pub fn children(&self) -> Vec<&Proof> {
        match self {
            Proof::Hyp(_) => vec![],
            Proof::ImpIntro { body, .. } | Proof::ForallIntro { body, .. } => vec![body],
            Proof::ImpElim { major, minor } | Proof::ExistsElim { major, minor, .. } => {
                vec![major, minor]
            }
            Proof::AndIntro(l, r) => vec![l, r],
            Proof::AndElimL(p)
            | Proof::AndElimR(p)
            | Proof::OrIntroL { proof: p, .. }
            | Proof::OrIntroR { proof: p, .. }
            | Proof::ForallElim { proof: p, .. }
            | Proof::ExistsIntro { proof: p, .. }
            | Proof::AbsurdElim { proof: p, .. } => vec![p],
            Proof::OrElim {
                major, left, right, ..
            } => vec![major, left, right],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Proof> {
        match self {
            Proof::Hyp(_) => vec![],
            Proof::ImpIntro { body, .. } | Proof::ForallIntro { body, .. } => vec![body],
            Proof::ImpElim { major, minor } | Proof::ExistsElim { major, minor, .. } => {
                vec![major, minor]
            }
            Proof::AndIntro(l, r) => vec![l, r],
            Proof::AndElimL(p)
            | Proof::AndElimR(p)
            | Proof::OrIntroL { proof: p, .. }
            | Proof::OrIntroR { proof: p, .. }
            | Proof::ForallElim { proof: p, .. }
            | Proof::ExistsIntro { proof: p, .. }
            | Proof::AbsurdElim { proof: p, .. } => vec![p],
            Proof::OrElim {
                major, left, right, ..
            } => vec![major, left, right],
        }
    }

    pub fn subproof(&self, path: &[usize]) -> Option<&Proof> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i).and_then(|c| c.subproof(rest)),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Every formula and term annotation stored in the nodes.
    pub fn for_each_annotation(&self, visit: &mut impl FnMut(Annotation<'_>)) {
        match self {
            Proof::ImpIntro { hyp, .. } => visit(Annotation::Formula(hyp)),
            Proof::OrIntroL { other, .. } | Proof::OrIntroR { other, .. } => {
                visit(Annotation::Formula(other))
            }
            Proof::ForallElim { witness, .. } => visit(Annotation::Term(witness)),
            Proof::ExistsIntro {
                witness, target, ..
            } => {
                visit(Annotation::Term(witness));
                visit(Annotation::Formula(target));
            }
            Proof::AbsurdElim { target, .. } => visit(Annotation::Formula(target)),
            _ => {}
        }
        for c in self.children() {
            c.for_each_annotation(visit);
        }
    }

    /// Every identifier: eigenvariables, variables and function symbols of
    /// annotations.
    pub fn idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_annotation(&mut |a| match a {
            Annotation::Formula(f) => f.collect_idents(&mut out),
            Annotation::Term(t) => t.collect_idents(&mut out),
        });
        self.for_each_node(&mut |p| match p {
            Proof::ForallIntro { var, .. } | Proof::ExistsElim { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        });
        out
    }

    /// Every label, referenced or discharged.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_node(&mut |p| match p {
            Proof::Hyp(l)
            | Proof::ImpIntro { label: l, .. }
            | Proof::ExistsElim { label: l, .. } => {
                out.insert(l.clone());
            }
            Proof::OrElim {
                left_label,
                right_label,
                ..
            } => {
                out.insert(left_label.clone());
                out.insert(right_label.clone());
            }
            _ => {}
        });
        out
    }

    /// Preorder traversal.
    pub fn for_each_node<'a>(&'a self, visit: &mut impl FnMut(&'a Proof)) {
        visit(self);
        for c in self.children() {
            c.for_each_node(visit);
        }
    }

    pub fn has_symbol(&self, f: &str) -> bool {
        let mut found = false;
        self.for_each_annotation(&mut |a| {
            found |= match a {
                Annotation::Formula(g) => g.has_symbol(f),
                Annotation::Term(t) => t.has_symbol(f),
            }
        });
        found
    }
}

pub enum Annotation<'a> {
    Formula(&'a Formula),
    Term(&'a Term),
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.rule_name();
        match self {
            Proof::Hyp(l) => write!(f, "(hyp {l})"),
            Proof::ImpIntro { label, hyp, body } => write!(f, "({name} {label} {hyp} {body})"),
            Proof::ImpElim { major, minor } => write!(f, "({name} {major} {minor})"),
            Proof::AndIntro(l, r) => write!(f, "({name} {l} {r})"),
            Proof::AndElimL(p) | Proof::AndElimR(p) => write!(f, "({name} {p})"),
            Proof::OrIntroL { other, proof } | Proof::OrIntroR { other, proof } => {
                write!(f, "({name} {other} {proof})")
            }
            Proof::OrElim {
                major,
                left_label,
                left,
                right_label,
                right,
            } => {
                write!(
                    f,
                    "({name} {major} {left_label} {left} {right_label} {right})"
                )
            }
            Proof::ForallIntro { var, body } => write!(f, "({name} {var} {body})"),
            Proof::ForallElim { witness, proof } => write!(f, "({name} {witness} {proof})"),
            Proof::ExistsIntro {
                witness,
                target,
                proof,
            } => write!(f, "({name} {witness} {target} {proof})"),
            Proof::ExistsElim {
                major,
                var,
                label,
                minor,
            } => write!(f, "({name} {major} {var} {label} {minor})"),
            Proof::AbsurdElim { target, proof } => write!(f, "({name} {target} {proof})"),
        }
    }
}

/// Location of a node: child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelErrorKind {
    #[error("{rule}: expected {expected}, found {found}")]
    RuleMismatch {
        rule: &'static str,
        expected: String,
        found: Formula,
    },
    #[error("unknown hypothesis label `{0}`")]
    UnknownLabel(String),
    #[error("{rule}: eigenvariable `{var}` is free in {place}")]
    EigenvariableViolation {
        rule: &'static str,
        var: String,
        place: String,
    },
    #[error("conclusion mismatch: expected {expected}, derived {found}")]
    ConclusionMismatch { expected: Formula, found: Formula },
    #[error("label `{0}` is already in scope")]
    LabelClash(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{path}: {kind}")]
pub struct KernelError {
    pub path: NodePath,
    pub kind: KernelErrorKind,
}

/// Checks `p` against `s`.
pub fn check(p: &Proof, s: &Sequent) -> Result<(), KernelError> {
    let found = infer(p, &s.context)?;
    if found.alpha_eq(&s.conclusion) {
        Ok(())
    } else {
        Err(KernelError {
            path: NodePath::default(),
            kind: KernelErrorKind::ConclusionMismatch {
                expected: s.conclusion.clone(),
                found,
            },
        })
    }
}

/// Computes the conclusion `p` derives in `ctx`, checking every rule.
pub fn infer(p: &Proof, ctx: &Context) -> Result<Formula, KernelError> {
    let mut checker = Checker {
        ctx: ctx.clone(),
        path: Vec::new(),
        record: None,
    };
    checker.infer(p)
}

/// The sequent derived at one node of a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub path: NodePath,
    pub context: Context,
    pub conclusion: Formula,
}

/// Checks `p` in `ctx` and returns the judgement of every node, in
/// preorder.
pub fn judgements(p: &Proof, ctx: &Context) -> Result<Vec<Judgement>, KernelError> {
    let mut checker = Checker {
        ctx: ctx.clone(),
        path: Vec::new(),
        record: Some(Vec::new()),
    };
    checker.infer(p)?;
    Ok(checker.record.unwrap_or_default())
}

struct Checker {
    ctx: Context,
    path: Vec<usize>,
    record: Option<Vec<Judgement>>,
}

impl Checker {
    fn err(&self, kind: KernelErrorKind) -> KernelError {
        KernelError {
            path: NodePath(self.path.clone()),
            kind,
        }
    }

    fn child(&mut self, i: usize, p: &Proof) -> Result<Formula, KernelError> {
        self.path.push(i);
        let r = self.infer(p)?;
        self.path.pop();
        Ok(r)
    }

    fn child_with(
        &mut self,
        i: usize,
        label: &str,
        hyp: Formula,
        p: &Proof,
    ) -> Result<Formula, KernelError> {
        if !self.ctx.push(label, hyp) {
            return Err(self.err(KernelErrorKind::LabelClash(label.to_string())));
        }
        let r = self.child(i, p);
        self.ctx.entries.pop();
        r
    }

    fn mismatch(&self, rule: &'static str, expected: &str, found: Formula) -> KernelError {
        self.err(KernelErrorKind::RuleMismatch {
            rule,
            expected: expected.to_string(),
            found,
        })
    }

    fn infer(&mut self, p: &Proof) -> Result<Formula, KernelError> {
        let slot = self.record.as_mut().map(|rec| {
            rec.push(Judgement {
                path: NodePath(self.path.clone()),
                context: self.ctx.clone(),
                conclusion: Formula::Absurd,
            });
            rec.len() - 1
        });
        let concl = self.infer_node(p)?;
        if let (Some(i), Some(rec)) = (slot, self.record.as_mut()) {
            rec[i].conclusion = concl.clone();
        }
        Ok(concl)
    }

    fn infer_node(&mut self, p: &Proof) -> Result<Formula, KernelError> {
        let rule = p.rule_name();
        match p {
            Proof::Hyp(l) => match self.ctx.get(l) {
                Some(f) => Ok(f.clone()),
                None => Err(self.err(KernelErrorKind::UnknownLabel(l.clone()))),
            },
            Proof::ImpIntro { label, hyp, body } => {
                let b = self.child_with(0, label, hyp.clone(), body)?;
                Ok(Formula::implies(hyp.clone(), b))
            }
            Proof::ImpElim { major, minor } => {
                let m = self.child(0, major)?;
                let Formula::Implies(a, b) = m else {
                    return Err(self.mismatch(rule, "an implication as major premise", m));
                };
                let arg = self.child(1, minor)?;
                if !arg.alpha_eq(&a) {
                    return Err(self.mismatch(rule, &format!("minor premise {a}"), arg));
                }
                Ok(*b)
            }
            Proof::AndIntro(l, r) => {
                let a = self.child(0, l)?;
                let b = self.child(1, r)?;
                Ok(Formula::and(a, b))
            }
            Proof::AndElimL(q) | Proof::AndElimR(q) => {
                let m = self.child(0, q)?;
                match m {
                    Formula::And(a, b) => Ok(if matches!(p, Proof::AndElimL(_)) {
                        *a
                    } else {
                        *b
                    }),
                    other => Err(self.mismatch(rule, "a conjunction", other)),
                }
            }
            Proof::OrIntroL { other, proof } => {
                let a = self.child(0, proof)?;
                Ok(Formula::or(a, other.clone()))
            }
            Proof::OrIntroR { other, proof } => {
                let b = self.child(0, proof)?;
                Ok(Formula::or(other.clone(), b))
            }
            Proof::OrElim {
                major,
                left_label,
                left,
                right_label,
                right,
            } => {
                let m = self.child(0, major)?;
                let Formula::Or(a, b) = m else {
                    return Err(self.mismatch(rule, "a disjunction as major premise", m));
                };
                let c1 = self.child_with(1, left_label, *a, left)?;
                let c2 = self.child_with(2, right_label, *b, right)?;
                if !c1.alpha_eq(&c2) {
                    return Err(self.mismatch(rule, &format!("right branch concluding {c1}"), c2));
                }
                Ok(c1)
            }
            Proof::ForallIntro { var, body } => {
                if let Some((l, _)) = self.ctx.iter().find(|(_, f)| f.has_free_var(var)) {
                    return Err(self.err(KernelErrorKind::EigenvariableViolation {
                        rule,
                        var: var.clone(),
                        place: format!("open hypothesis `{l}`"),
                    }));
                }
                let b = self.child(0, body)?;
                Ok(Formula::forall(var.clone(), b))
            }
            Proof::ForallElim { witness, proof } => {
                let m = self.child(0, proof)?;
                match m {
                    Formula::Forall(x, a) => Ok(a.instantiate(&x, witness)),
                    other => Err(self.mismatch(rule, "a universal formula", other)),
                }
            }
            Proof::ExistsIntro {
                witness,
                target,
                proof,
            } => {
                let Formula::Exists(x, a) = target else {
                    return Err(self.mismatch(rule, "an existential target", target.clone()));
                };
                let expected = a.instantiate(x, witness);
                let found = self.child(0, proof)?;
                if !found.alpha_eq(&expected) {
                    return Err(self.mismatch(rule, &format!("premise {expected}"), found));
                }
                Ok(target.clone())
            }
            Proof::ExistsElim {
                major,
                var,
                label,
                minor,
            } => {
                let m = self.child(0, major)?;
                let Formula::Exists(x, a) = &m else {
                    return Err(self.mismatch(rule, "an existential major premise", m));
                };
                let violation = |place: String| KernelErrorKind::EigenvariableViolation {
                    rule,
                    var: var.clone(),
                    place,
                };
                if m.has_free_var(var) {
                    return Err(self.err(violation("the major premise".into())));
                }
                if let Some((l, _)) = self.ctx.iter().find(|(_, f)| f.has_free_var(var)) {
                    let place = format!("open hypothesis `{l}`");
                    return Err(self.err(violation(place)));
                }
                let hyp = a.instantiate(x, &Term::var(var.clone()));
                let c = self.child_with(1, label, hyp, minor)?;
                if c.has_free_var(var) {
                    return Err(self.err(violation("the conclusion".into())));
                }
                Ok(c)
            }
            Proof::AbsurdElim { target, proof } => {
                let m = self.child(0, proof)?;
                if m != Formula::Absurd {
                    return Err(self.mismatch(rule, "false", m));
                }
                Ok(target.clone())
            }
        }
    }
}
