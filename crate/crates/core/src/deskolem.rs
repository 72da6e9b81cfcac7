//! Deskolemization as a proof transformation.
//!
//! Given a proof of `Γ ⊢ ∀x̄∃y A` and a proof of `Γ, ∀x̄ (f(x̄)/y)A ⊢ B`
//! where `f` is absent from `Γ` and `B`, [`deskolemize`] builds a proof of
//! `Γ ⊢ B`. The work is done by [`deskolemize_general`], which allows
//! frozen Skolem terms in the end sequent and returns a proof of
//! `Γ, Δ ⊢ B` where `Δ` holds the total instances of those terms.
//!
//! The recursion runs over a normal proof. A node whose premise is a
//! partial instance must be the `∀`-elimination producing a total
//! instance; it becomes an axiom on the matching `Δ` entry. Every other
//! node is rebuilt from its transformed premises, after which the total
//! instances of Skolem terms that no longer occur in the node's sequent
//! are discharged one at a time, largest term first, by
//! [`eliminate_hypothesis`]: the term is abstracted to a fresh variable
//! with [`prune`] and the resulting hypothesis is discharged by an
//! `∃`-elimination on an instance of `∀x̄∃y A`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::instance::{
    all_f_terms_frozen, classify, f_terms_of, InstanceClass, SignatureError, SkolemSignature,
};
use crate::kernel::{check, judgements, Context, Judgement, KernelError, NodePath, Proof, Sequent};
use crate::normalize::{is_normal, normalize, NormalizeError};
use crate::syntax::{fresh_var, largest_first, Formula, Term};
use crate::transform::{forall_elims, rename_eigenvariables, weaken_by, TransformError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeskolemError {
    #[error("Skolem terms of `{symbol}` are not all frozen in {formula}")]
    NotFrozen { symbol: String, formula: Formula },
    #[error("variable `{0}` occurs in the sequent")]
    VariableNotFresh(String),
    #[error("term {0} is not a function application")]
    NotATerm(Term),
    #[error("term {term} occurs in {formula}")]
    TermOccurs { term: Term, formula: Formula },
    #[error("hypothesis `{label}` is not the total instance {expected}")]
    NotTotalInstance { label: String, expected: Formula },
    #[error("{path}: Skolem terms are not frozen in {formula}")]
    FrozennessViolation { path: NodePath, formula: Formula },
    #[error("{path}: partial instance {formula} is not the premise of a universal elimination")]
    PartialPositionViolation { path: NodePath, formula: Formula },
    #[error("Skolem symbol `{symbol}` occurs in {formula}")]
    SymbolOccurs { symbol: String, formula: Formula },
    #[error("no hypothesis is the Skolem axiom {0}")]
    MissingSkolemHypothesis(Formula),
    #[error("hypothesis `{0}` of the existence proof is not available in the target context")]
    ContextMismatch(String),
    #[error("axiom `{label}` is not of the form ∀x̄∃y A: {reason}")]
    BadAxiomShape { label: String, reason: String },
    #[error("symbol `{0}` is already used by the theory")]
    SymbolInUse(String),
    #[error("unknown hypothesis label `{0}`")]
    UnknownLabel(String),
    #[error("internal: transformed proof does not check: {0}")]
    Internal(KernelError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

type Result<T> = std::result::Result<T, DeskolemError>;

fn ensure_frozen(f: &Formula, symbol: &str) -> Result<()> {
    if all_f_terms_frozen(f, symbol) {
        Ok(())
    } else {
        Err(DeskolemError::NotFrozen {
            symbol: symbol.to_string(),
            formula: f.clone(),
        })
    }
}

fn sequent_idents(s: &Sequent) -> BTreeSet<String> {
    let mut out = s.context.idents();
    s.conclusion.collect_idents(&mut out);
    out
}

/// True if every formula derived or assumed anywhere in the proof has its
/// `symbol`-terms frozen.
fn proof_all_frozen(p: &Proof, s: &Sequent, symbol: &str) -> Result<bool> {
    let js = judgements(p, &s.context)?;
    Ok(js.iter().all(|j| {
        all_f_terms_frozen(&j.conclusion, symbol)
            && j.context.formulas().all(|f| all_f_terms_frozen(f, symbol))
    }))
}

/// Replaces the frozen occurrences of `u` by the variable `z` throughout a
/// proof of `Γ ⊢ B`, giving a proof of `σΓ ⊢ σB`.
///
/// Requires all terms headed by `u`'s symbol to be frozen in `Γ` and `B`,
/// and `z` to be absent from the sequent. If some formula inside the proof
/// has an unfrozen occurrence, the proof is normalized first.
pub fn prune(p: &Proof, s: &Sequent, u: &Term, z: &str) -> Result<(Proof, Sequent)> {
    let Term::App(symbol, _) = u else {
        return Err(DeskolemError::NotATerm(u.clone()));
    };
    for f in s.context.formulas().chain([&s.conclusion]) {
        ensure_frozen(f, symbol)?;
    }
    if sequent_idents(s).contains(z) || u.has_var(z) {
        return Err(DeskolemError::VariableNotFresh(z.to_string()));
    }
    let mut p = p.clone();
    if !proof_all_frozen(&p, s, symbol)? {
        p = normalize(&p, &s.context)?;
        if !proof_all_frozen(&p, s, symbol)? {
            let js = judgements(&p, &s.context)?;
            let bad = js
                .into_iter()
                .find(|j| !all_f_terms_frozen(&j.conclusion, symbol))
                .map(|j| j.conclusion);
            return Err(DeskolemError::NotFrozen {
                symbol: symbol.clone(),
                formula: bad.unwrap_or_else(|| s.conclusion.clone()),
            });
        }
    }
    let mut avoid = u.vars();
    avoid.insert(z.to_string());
    let p = rename_eigenvariables(&p, &avoid);
    let by = Term::var(z);
    let out = map_annotations(&p, &|f| f.replace_frozen(u, z), &|t| t.replace(u, &by));
    let context = Context::from_entries(
        s.context
            .iter()
            .map(|(l, f)| (l.to_string(), f.replace_frozen(u, z)))
            .collect(),
    )
    .expect("labels unchanged");
    let seq = Sequent::new(context, s.conclusion.replace_frozen(u, z));
    check(&out, &seq).map_err(DeskolemError::Internal)?;
    Ok((out, seq))
}

fn map_annotations(
    p: &Proof,
    ff: &impl Fn(&Formula) -> Formula,
    ft: &impl Fn(&Term) -> Term,
) -> Proof {
    let mut out = match p {
        Proof::ImpIntro { label, hyp, body } => {
            Proof::imp_intro(label.clone(), ff(hyp), (**body).clone())
        }
        Proof::OrIntroL { other, proof } => Proof::or_intro_l(ff(other), (**proof).clone()),
        Proof::OrIntroR { other, proof } => Proof::or_intro_r(ff(other), (**proof).clone()),
        Proof::ForallElim { witness, proof } => Proof::forall_elim(ft(witness), (**proof).clone()),
        Proof::ExistsIntro {
            witness,
            target,
            proof,
        } => Proof::exists_intro(ft(witness), ff(target), (**proof).clone()),
        Proof::AbsurdElim { target, proof } => Proof::absurd_elim(ff(target), (**proof).clone()),
        other => other.clone(),
    };
    for c in out.children_mut() {
        *c = map_annotations(c, ff, ft);
    }
    out
}

/// Checks `pi_a` and that its context is contained in `target`; returns
/// `pi_a` made valid in `target`.
fn lift_existence_proof(pi_a: &Proof, pi_a_seq: &Sequent, target: &Context) -> Result<Proof> {
    for (l, f) in pi_a_seq.context.iter() {
        match target.get(l) {
            Some(g) if g.alpha_eq(f) => {}
            _ => return Err(DeskolemError::ContextMismatch(l.to_string())),
        }
    }
    let extra = Context::from_entries(
        target
            .iter()
            .filter(|(l, _)| !pi_a_seq.context.contains_label(l))
            .map(|(l, f)| (l.to_string(), f.clone()))
            .collect(),
    )
    .expect("subset of a context");
    Ok(weaken_by(pi_a, &extra))
}

/// Discharges the hypothesis `label: (ū/x̄, f(ū)/y)A` of a proof of
/// `Γ, label ⊢ B`, given a proof of `Γ₀ ⊢ ∀x̄∃y A` with `Γ₀ ⊆ Γ`.
/// Requires `f(ū)` absent from `Γ` and `B`.
pub fn eliminate_hypothesis(
    pi_a: &Proof,
    pi_a_seq: &Sequent,
    p: &Proof,
    s: &Sequent,
    label: &str,
    args: &[Term],
    sig: &SkolemSignature,
) -> Result<(Proof, Sequent)> {
    let hyp = s
        .context
        .get(label)
        .ok_or_else(|| DeskolemError::UnknownLabel(label.to_string()))?;
    let expected = sig.total_instance(args);
    if !hyp.alpha_eq(&expected) {
        return Err(DeskolemError::NotTotalInstance {
            label: label.to_string(),
            expected,
        });
    }
    let u = sig.skolem_term(args);
    let rest = s.context.without(label);
    for f in rest.formulas().chain([&s.conclusion]) {
        ensure_frozen(f, sig.symbol())?;
        if f.contains_term(&u) {
            return Err(DeskolemError::TermOccurs {
                term: u,
                formula: f.clone(),
            });
        }
    }
    let mut avoid = sequent_idents(s);
    avoid.extend(p.idents());
    avoid.extend(pi_a.idents());
    avoid.extend(sequent_idents(pi_a_seq));
    let z = fresh_var(&avoid);

    let (pruned, _) = prune(p, s, &u, &z)?;
    let lifted = lift_existence_proof(pi_a, pi_a_seq, &rest)?;
    let major = forall_elims(&lifted, &rest, args)?;
    let out = Proof::exists_elim(major, z, label, pruned);
    let seq = Sequent::new(rest, s.conclusion.clone());
    check(&out, &seq).map_err(DeskolemError::Internal)?;
    Ok((out, seq))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialPositions {
    Ok,
    Violation { path: NodePath, formula: Formula },
}

/// Verifies that every node concluding a partial instance is the major
/// premise of a `∀`-elimination.
pub fn assert_partial_positions(
    p: &Proof,
    s: &Sequent,
    sig: &SkolemSignature,
) -> Result<PartialPositions> {
    for j in judgements(p, &s.context)? {
        if !classify(&j.conclusion, sig).is_partial() {
            continue;
        }
        let parent_ok = match j.path.0.split_last() {
            None => false,
            Some((_, parent)) => matches!(p.subproof(parent), Some(Proof::ForallElim { .. })),
        };
        if !parent_ok {
            return Ok(PartialPositions::Violation {
                path: j.path,
                formula: j.conclusion,
            });
        }
    }
    Ok(PartialPositions::Ok)
}

/// One total instance `(ū/x̄, f(ū)/y)A` with its hypothesis label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalInstance {
    pub label: String,
    pub args: Vec<Term>,
    pub formula: Formula,
}

/// The hypotheses `Δ`, one per Skolem term, largest term first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TotalInstanceSet {
    pub entries: Vec<TotalInstance>,
}

impl TotalInstanceSet {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    fn extend_context(&self, ctx: &Context) -> Context {
        let mut out = ctx.clone();
        for e in &self.entries {
            out.push(e.label.clone(), e.formula.clone());
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Deskolemized {
    pub proof: Proof,
    pub sequent: Sequent,
    pub delta: TotalInstanceSet,
}

/// Deterministic labels for `Δ` entries, derived from the printed term and
/// kept clear of every label already in use.
struct DeltaLabels {
    reserved: BTreeSet<String>,
    assigned: BTreeMap<Term, String>,
}

impl DeltaLabels {
    fn label(&mut self, t: &Term) -> String {
        if let Some(l) = self.assigned.get(t) {
            return l.clone();
        }
        let tokens: Vec<String> = t
            .to_string()
            .split(['(', ')', ' '])
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        let base = format!("sk-{}", tokens.join("-"));
        let taken = |l: &str| self.reserved.contains(l) || self.assigned.values().any(|a| a == l);
        let label = if !taken(&base) {
            base
        } else {
            (1..)
                .map(|k| format!("{base}-{k}"))
                .find(|l| !taken(l))
                .expect("unbounded")
        };
        self.assigned.insert(t.clone(), label.clone());
        label
    }
}

struct General<'a> {
    sig: &'a SkolemSignature,
    skolem_label: &'a str,
    pi_a: &'a Proof,
    pi_a_seq: &'a Sequent,
    proof: &'a Proof,
    nodes: BTreeMap<Vec<usize>, Judgement>,
    labels: DeltaLabels,
}

impl General<'_> {
    fn instances(&mut self, terms: &[Term]) -> TotalInstanceSet {
        let entries = terms
            .iter()
            .map(|t| {
                let args = self
                    .sig
                    .skolem_args(t)
                    .expect("f-term of the Skolem symbol")
                    .to_vec();
                TotalInstance {
                    label: self.labels.label(t),
                    formula: self.sig.total_instance(&args),
                    args,
                }
            })
            .collect();
        TotalInstanceSet { entries }
    }

    /// Returns a proof of the node's sequent with the Skolem hypothesis
    /// replaced by the total instances of the node's Skolem terms (which
    /// are also returned).
    fn go(&mut self, path: &mut Vec<usize>) -> Result<(Proof, Vec<Term>)> {
        let node = self.proof.subproof(path).expect("path from traversal");
        let j = self.nodes[path.as_slice()].clone();
        let here = NodePath(path.clone());
        let gamma = j.context.without(self.skolem_label);
        for f in gamma.formulas().chain([&j.conclusion]) {
            if !classify(f, self.sig).is_frozen() {
                return Err(DeskolemError::FrozennessViolation {
                    path: here,
                    formula: f.clone(),
                });
            }
        }
        let symbol = self.sig.symbol();
        let own_terms = f_terms_of(gamma.formulas().chain([&j.conclusion]), symbol);

        if let Proof::Hyp(l) = node {
            if l == self.skolem_label {
                // Nullary signature: the Skolem axiom is its own total instance.
                let t = self.sig.skolem_term(&[]);
                return Ok((Proof::hyp(self.labels.label(&t)), own_terms));
            }
        }

        let mut premise_partial = false;
        for i in 0..node.children().len() {
            path.push(i);
            let cj = &self.nodes[path.as_slice()];
            premise_partial |= classify(&cj.conclusion, self.sig).is_partial();
            path.pop();
        }
        if premise_partial {
            return match (node, classify(&j.conclusion, self.sig)) {
                (Proof::ForallElim { .. }, InstanceClass::TotalInstance { args }) => {
                    let t = self.sig.skolem_term(&args);
                    Ok((Proof::hyp(self.labels.label(&t)), own_terms))
                }
                _ => Err(DeskolemError::PartialPositionViolation {
                    path: here,
                    formula: j.conclusion.clone(),
                }),
            };
        }

        let mut premises = Vec::new();
        let mut union: BTreeSet<Term> = BTreeSet::new();
        for i in 0..node.children().len() {
            path.push(i);
            let (q, terms) = self.go(path)?;
            path.pop();
            union.extend(terms);
            premises.push(q);
        }
        let mut delta_terms: Vec<Term> = union.into_iter().collect();
        delta_terms.sort_by(largest_first);
        let delta = self.instances(&delta_terms);
        let delta_ctx = delta.extend_context(&Context::new());
        let mut rebuilt = node.clone();
        for (slot, q) in rebuilt.children_mut().into_iter().zip(premises) {
            *slot = weaken_by(&q, &delta_ctx);
        }

        // Discharge instances of terms that left the sequent, largest first.
        let mut current = delta;
        let mut proof = rebuilt;
        while let Some(pos) = current.entries.iter().position(|e| {
            let t = self.sig.skolem_term(&e.args);
            !own_terms.contains(&t)
        }) {
            let entry = current.entries[pos].clone();
            let seq = Sequent::new(current.extend_context(&gamma), j.conclusion.clone());
            let (q, _) = eliminate_hypothesis(
                self.pi_a,
                self.pi_a_seq,
                &proof,
                &seq,
                &entry.label,
                &entry.args,
                self.sig,
            )?;
            proof = q;
            current.entries.remove(pos);
        }

        let have: BTreeSet<&Term> = delta_terms.iter().collect();
        let missing: Vec<Term> = own_terms
            .iter()
            .filter(|t| !have.contains(t))
            .cloned()
            .collect();
        if !missing.is_empty() {
            let extra = self.instances(&missing).extend_context(&Context::new());
            proof = weaken_by(&proof, &extra);
        }
        Ok((proof, own_terms))
    }
}

/// Requires `s.context` to hold the Skolem axiom under `skolem_label`,
/// the remaining context `Γ′` and the conclusion `B′` to have all Skolem
/// terms frozen, and `pi_a` to prove `∀x̄∃y A` from a sub-context of `Γ′`.
/// Returns a proof of `Γ′, Δ ⊢ B′`.
pub fn deskolemize_general(
    pi_a: &Proof,
    pi_a_seq: &Sequent,
    p: &Proof,
    s: &Sequent,
    skolem_label: &str,
    sig: &SkolemSignature,
) -> Result<Deskolemized> {
    let axiom = s
        .context
        .get(skolem_label)
        .ok_or_else(|| DeskolemError::UnknownLabel(skolem_label.to_string()))?;
    if !axiom.alpha_eq(&sig.skolem_axiom()) {
        return Err(DeskolemError::MissingSkolemHypothesis(sig.skolem_axiom()));
    }
    check(p, s)?;
    check(pi_a, pi_a_seq)?;
    let existential = sig.existential();
    if !pi_a_seq.conclusion.alpha_eq(&existential) {
        return Err(DeskolemError::Kernel(KernelError {
            path: NodePath::default(),
            kind: crate::kernel::KernelErrorKind::ConclusionMismatch {
                expected: existential,
                found: pi_a_seq.conclusion.clone(),
            },
        }));
    }
    let gamma = s.context.without(skolem_label);
    lift_existence_proof(pi_a, pi_a_seq, &gamma)?;
    for f in gamma.formulas().chain([&s.conclusion]) {
        if !classify(f, sig).is_frozen() {
            return Err(DeskolemError::FrozennessViolation {
                path: NodePath::default(),
                formula: f.clone(),
            });
        }
    }

    let p = if is_normal(p) {
        p.clone()
    } else {
        normalize(p, &s.context)?
    };
    let pi_a = if is_normal(pi_a) {
        pi_a.clone()
    } else {
        normalize(pi_a, &pi_a_seq.context)?
    };

    let mut reserved = p.labels();
    reserved.extend(pi_a.labels());
    reserved.extend(s.context.labels().map(str::to_string));
    reserved.extend(pi_a_seq.context.labels().map(str::to_string));
    let nodes = judgements(&p, &s.context)?
        .into_iter()
        .map(|j| (j.path.0.clone(), j))
        .collect();
    let mut g = General {
        sig,
        skolem_label,
        pi_a: &pi_a,
        pi_a_seq,
        proof: &p,
        nodes,
        labels: DeltaLabels {
            reserved,
            assigned: BTreeMap::new(),
        },
    };
    let (proof, terms) = g.go(&mut Vec::new())?;
    let delta = g.instances(&terms);
    let sequent = Sequent::new(delta.extend_context(&gamma), s.conclusion.clone());
    check(&proof, &sequent).map_err(DeskolemError::Internal)?;
    Ok(Deskolemized {
        proof,
        sequent,
        delta,
    })
}

/// Turns a proof of `Γ, S ⊢ B` (with `S` the Skolem axiom, `f` absent from
/// `Γ` and `B`) and a proof of `Γ₀ ⊢ ∀x̄∃y A` with `Γ₀ ⊆ Γ` into a proof
/// of `Γ ⊢ B` free of `f`.
pub fn deskolemize(
    pi_a: &Proof,
    pi_a_seq: &Sequent,
    p: &Proof,
    s: &Sequent,
    sig: &SkolemSignature,
) -> Result<(Proof, Sequent)> {
    let axiom = sig.skolem_axiom();
    let label = s
        .context
        .find_formula(&axiom)
        .ok_or_else(|| DeskolemError::MissingSkolemHypothesis(axiom.clone()))?
        .to_string();
    let gamma = s.context.without(&label);
    for f in gamma.formulas().chain([&s.conclusion]) {
        if f.has_symbol(sig.symbol()) {
            return Err(DeskolemError::SymbolOccurs {
                symbol: sig.symbol().to_string(),
                formula: f.clone(),
            });
        }
    }
    let out = deskolemize_general(pi_a, pi_a_seq, p, s, &label, sig)?;
    debug_assert!(out.delta.is_empty());
    if out.proof.has_symbol(sig.symbol()) {
        return Err(DeskolemError::SymbolOccurs {
            symbol: sig.symbol().to_string(),
            formula: s.conclusion.clone(),
        });
    }
    Ok((out.proof, out.sequent))
}

/// The canonical proof of `S ⊢ ∀x̄∃y A` from the Skolem axiom `S`.
pub fn derive_existential(skolem_label: &str, sig: &SkolemSignature) -> (Proof, Sequent) {
    let xs: Vec<Term> = sig.params().iter().map(Term::var).collect();
    let inst = xs.iter().fold(Proof::hyp(skolem_label), |acc, x| {
        Proof::forall_elim(x.clone(), acc)
    });
    let target = Formula::exists(sig.witness().to_string(), sig.body().clone());
    let body = Proof::exists_intro(sig.generic_term(), target, inst);
    let proof = sig
        .params()
        .iter()
        .rev()
        .fold(body, |acc, x| Proof::forall_intro(x.clone(), acc));
    let mut ctx = Context::new();
    ctx.push(skolem_label, sig.skolem_axiom());
    (proof, Sequent::new(ctx, sig.existential()))
}

/// Replaces the axiom `label: ∀x̄∃y A` of `theory` by `∀x̄ (f(x̄)/y)A`.
pub fn skolemize_axiom(
    theory: &Context,
    label: &str,
    symbol: &str,
) -> Result<(Context, SkolemSignature)> {
    let axiom = theory
        .get(label)
        .ok_or_else(|| DeskolemError::UnknownLabel(label.to_string()))?;
    let bad = |reason: &str| DeskolemError::BadAxiomShape {
        label: label.to_string(),
        reason: reason.to_string(),
    };
    let mut params = Vec::new();
    let mut f = axiom;
    while let Formula::Forall(x, body) = f {
        params.push(x.clone());
        f = body;
    }
    let Formula::Exists(y, body) = f else {
        return Err(bad("no existential after the universal prefix"));
    };
    if theory.idents().contains(symbol) {
        return Err(DeskolemError::SymbolInUse(symbol.to_string()));
    }
    let sig = SkolemSignature::new(symbol, params, y.clone(), (**body).clone())
        .map_err(|e| bad(&e.to_string()))?;
    let entries = theory
        .iter()
        .map(|(l, g)| {
            (
                l.to_string(),
                if l == label {
                    sig.skolem_axiom()
                } else {
                    g.clone()
                },
            )
        })
        .collect();
    Ok((
        Context::from_entries(entries).expect("labels unchanged"),
        sig,
    ))
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
    fn f(t: Term) -> Term {
        Term::app("f", vec![t])
    }
    fn p2(a: Term, b: Term) -> Formula {
        Formula::atom("P", vec![a, b])
    }
    fn ctx(entries: &[(&str, Formula)]) -> Context {
        Context::from_entries(
            entries
                .iter()
                .map(|(l, f)| (l.to_string(), f.clone()))
                .collect(),
        )
        .unwrap()
    }
    fn sig() -> SkolemSignature {
        SkolemSignature::new("f", vec!["x".into()], "y", p2(v("x"), v("y"))).unwrap()
    }

    #[test]
    fn prune_axiom_case() {
        let pf = Formula::atom("P", vec![f(c("c"))]);
        let s = Sequent::new(ctx(&[("h", pf.clone())]), pf);
        let (q, s2) = prune(&Proof::hyp("h"), &s, &f(c("c")), "z").unwrap();
        assert_eq!(q, Proof::hyp("h"));
        assert_eq!(s2.to_string(), "(seq ((h (atom P z))) (atom P z))");
    }

    #[test]
    fn prune_identity_when_absent() {
        let pc = Formula::atom("P", vec![c("c")]);
        let s = Sequent::new(ctx(&[("h", pc.clone())]), pc);
        let p = Proof::and_elim_l(Proof::and_intro(Proof::hyp("h"), Proof::hyp("h")));
        let (q, _) = prune(&p, &s, &f(c("d")), "z").unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn prune_forall_elim_witness() {
        let u = Formula::forall("x", Formula::atom("Q", vec![v("x")]));
        let s = Sequent::new(ctx(&[("u", u)]), Formula::atom("Q", vec![f(c("c"))]));
        let p = Proof::forall_elim(f(c("c")), Proof::hyp("u"));
        let (q, s2) = prune(&p, &s, &f(c("c")), "z").unwrap();
        assert_eq!(q, Proof::forall_elim(v("z"), Proof::hyp("u")));
        assert_eq!(check(&q, &s2), Ok(()));
    }

    #[test]
    fn prune_rejects_unfrozen_and_non_fresh() {
        let bad = Formula::forall("x", Formula::atom("Q", vec![f(v("x"))]));
        let s = Sequent::new(ctx(&[("h", bad.clone())]), bad);
        assert!(matches!(
            prune(&Proof::hyp("h"), &s, &f(c("c")), "z"),
            Err(DeskolemError::NotFrozen { .. })
        ));
        let q = Formula::atom("Q", vec![v("z")]);
        let s = Sequent::new(ctx(&[("h", q.clone())]), q);
        assert_eq!(
            prune(&Proof::hyp("h"), &s, &f(c("c")), "z").unwrap_err(),
            DeskolemError::VariableNotFresh("z".into())
        );
    }

    #[test]
    fn derive_existential_shapes() {
        let s = sig();
        let (p, seq) = derive_existential("s", &s);
        assert_eq!(
            p.to_string(),
            "(forall-i x (exists-i (f x) (exists y (atom P x y)) (forall-e x (hyp s))))"
        );
        assert_eq!(check(&p, &seq), Ok(()));

        let s0 = SkolemSignature::new("k", vec![], "y", Formula::atom("Q", vec![v("y")])).unwrap();
        let (p, seq) = derive_existential("s", &s0);
        assert_eq!(p.to_string(), "(exists-i k (exists y (atom Q y)) (hyp s))");
        assert_eq!(check(&p, &seq), Ok(()));

        let a = Formula::atom("R", vec![v("x1"), v("x2"), v("y")]);
        let s2 = SkolemSignature::new("g", vec!["x1".into(), "x2".into()], "y", a).unwrap();
        let (p, seq) = derive_existential("s", &s2);
        assert!(
            matches!(&p, Proof::ForallIntro { body, .. } if matches!(**body, Proof::ForallIntro { .. }))
        );
        assert_eq!(check(&p, &seq), Ok(()));
    }

    #[test]
    fn skolemize_axiom_cases() {
        let theory = ctx(&[(
            "ax",
            Formula::forall("x", Formula::exists("y", p2(v("x"), v("y")))),
        )]);
        let (t, s) = skolemize_axiom(&theory, "ax", "f").unwrap();
        assert_eq!(
            t.get("ax").unwrap().to_string(),
            "(forall x (atom P x (f x)))"
        );
        assert_eq!(s.arity(), 1);

        let theory = ctx(&[("ax", Formula::exists("y", Formula::atom("Q", vec![v("y")])))]);
        let (t, _) = skolemize_axiom(&theory, "ax", "f").unwrap();
        assert_eq!(t.get("ax").unwrap().to_string(), "(atom Q f)");

        let theory = ctx(&[("ax", Formula::atom("P", vec![c("c")]))]);
        assert!(matches!(
            skolemize_axiom(&theory, "ax", "f"),
            Err(DeskolemError::BadAxiomShape { .. })
        ));

        let theory = ctx(&[
            (
                "ax",
                Formula::forall("x", Formula::exists("y", p2(v("x"), v("y")))),
            ),
            ("b", Formula::atom("Q", vec![f(c("c"))])),
        ]);
        assert_eq!(
            skolemize_axiom(&theory, "ax", "f").unwrap_err(),
            DeskolemError::SymbolInUse("f".into())
        );
    }

    fn worked() -> (Proof, Sequent, Proof, Sequent) {
        let ex = Formula::forall("x", Formula::exists("y", p2(v("x"), v("y"))));
        let pi_a_seq = Sequent::new(ctx(&[("h0", ex.clone())]), ex.clone());
        let goal = Formula::exists("y", p2(c("c"), v("y")));
        let s = sig().skolem_axiom();
        let p = Proof::exists_intro(
            f(c("c")),
            goal.clone(),
            Proof::forall_elim(c("c"), Proof::hyp("s")),
        );
        let seq = Sequent::new(ctx(&[("h0", ex), ("s", s)]), goal);
        (Proof::hyp("h0"), pi_a_seq, p, seq)
    }

    #[test]
    fn worked_example_deskolemizes() {
        let (pi_a, pi_a_seq, p, seq) = worked();
        assert_eq!(check(&p, &seq), Ok(()));
        assert_eq!(
            assert_partial_positions(&p, &seq, &sig()).unwrap(),
            PartialPositions::Ok
        );
        let (q, s2) = deskolemize(&pi_a, &pi_a_seq, &p, &seq, &sig()).unwrap();
        assert_eq!(check(&q, &s2), Ok(()));
        assert!(!q.has_symbol("f"));
        assert_eq!(
            s2.to_string(),
            "(seq ((h0 (forall x (exists y (atom P x y))))) (exists y (atom P c y)))"
        );
        assert_eq!(
            q.to_string(),
            "(exists-e (forall-e c (hyp h0)) z0 sk-f-c (exists-i z0 (exists y (atom P c y)) (hyp sk-f-c)))"
        );
    }

    #[test]
    fn eliminate_hypothesis_worked_example() {
        let ex = Formula::forall("x", Formula::exists("y", p2(v("x"), v("y"))));
        let pi_a_seq = Sequent::new(ctx(&[("h0", ex.clone())]), ex.clone());
        let goal = Formula::exists("y", p2(c("c"), v("y")));
        let seq = Sequent::new(
            ctx(&[("h0", ex.clone()), ("d", p2(c("c"), f(c("c"))))]),
            goal.clone(),
        );
        let p = Proof::exists_intro(f(c("c")), goal.clone(), Proof::hyp("d"));
        let (q, s2) = eliminate_hypothesis(
            &Proof::hyp("h0"),
            &pi_a_seq,
            &p,
            &seq,
            "d",
            &[c("c")],
            &sig(),
        )
        .unwrap();
        assert_eq!(check(&q, &s2), Ok(()));
        assert!(s2.context.alpha_eq(&ctx(&[("h0", ex)])));
        assert!(
            matches!(&q, Proof::ExistsElim { major, .. } if **major == Proof::forall_elim(c("c"), Proof::hyp("h0")))
        );

        // f(c) in the goal is rejected
        let bad = Sequent::new(seq.context.clone(), p2(c("c"), f(c("c"))));
        assert!(matches!(
            eliminate_hypothesis(
                &Proof::hyp("h0"),
                &pi_a_seq,
                &Proof::hyp("d"),
                &bad,
                "d",
                &[c("c")],
                &sig()
            ),
            Err(DeskolemError::TermOccurs { .. })
        ));
    }

    #[test]
    fn bare_skolem_hypothesis_is_not_frozen() {
        let (pi_a, pi_a_seq, _, seq) = worked();
        let seq = Sequent::new(seq.context.clone(), sig().skolem_axiom());
        let err =
            deskolemize_general(&pi_a, &pi_a_seq, &Proof::hyp("s"), &seq, "s", &sig()).unwrap_err();
        assert!(matches!(err, DeskolemError::FrozennessViolation { .. }));
    }

    #[test]
    fn two_instances_keep_delta() {
        let (pi_a, pi_a_seq, _, seq) = worked();
        let goal = Formula::and(p2(c("c"), f(c("c"))), p2(c("d"), f(c("d"))));
        let p = Proof::and_intro(
            Proof::forall_elim(c("c"), Proof::hyp("s")),
            Proof::forall_elim(c("d"), Proof::hyp("s")),
        );
        let seq = Sequent::new(seq.context.clone(), goal);
        let out = deskolemize_general(&pi_a, &pi_a_seq, &p, &seq, "s", &sig()).unwrap();
        assert_eq!(check(&out.proof, &out.sequent), Ok(()));
        let labels: Vec<&str> = out.delta.entries.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, vec!["sk-f-c", "sk-f-d"]);
        assert_eq!(out.proof.to_string(), "(and-i (hyp sk-f-c) (hyp sk-f-d))");
    }

    #[test]
    fn hand_built_forall_intro_over_partial_instance_is_flagged() {
        let (_, _, _, seq) = worked();
        let s = sig().skolem_axiom();
        // ∀I re-deriving the axiom as the minor premise of a detour
        let p = Proof::imp_elim(
            Proof::imp_intro("h", s.clone(), Proof::forall_elim(c("c"), Proof::hyp("h"))),
            Proof::forall_intro("w", Proof::forall_elim(v("w"), Proof::hyp("s"))),
        );
        let seq = Sequent::new(seq.context.clone(), p2(c("c"), f(c("c"))));
        assert_eq!(check(&p, &seq), Ok(()));
        let r = assert_partial_positions(&p, &seq, &sig()).unwrap();
        assert!(
            matches!(r, PartialPositions::Violation { ref path, .. } if *path == NodePath(vec![1]))
        );
        let n = normalize(&p, &seq.context).unwrap();
        assert_eq!(
            assert_partial_positions(&n, &seq, &sig()).unwrap(),
            PartialPositions::Ok
        );
        let _ = s;
    }
}
