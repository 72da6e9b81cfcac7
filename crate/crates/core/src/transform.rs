//! Structural proof transformations: substitution of terms and of
//! hypotheses, binder renaming, weakening, and iterated `∀`-elimination.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::kernel::{infer, Context, KernelError, Proof, Sequent};
use crate::syntax::{fresh_name, fresh_var, Formula, Subst, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("label `{0}` is already used by the context")]
    LabelClash(String),
    #[error("expected {expected} leading universal quantifiers, conclusion {found} has fewer")]
    ShapeMismatch { expected: usize, found: Formula },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Applies `s` to every formula and term of the proof. Eigenvariables bind
/// in their subproof; they are renamed when a substituted term mentions
/// them.
pub fn subst_proof(p: &Proof, s: &Subst) -> Proof {
    if s.is_empty() {
        return p.clone();
    }
    match p {
        Proof::Hyp(_) => p.clone(),
        Proof::ImpIntro { label, hyp, body } => {
            Proof::imp_intro(label.clone(), hyp.subst(s), subst_proof(body, s))
        }
        Proof::ImpElim { major, minor } => {
            Proof::imp_elim(subst_proof(major, s), subst_proof(minor, s))
        }
        Proof::AndIntro(l, r) => Proof::and_intro(subst_proof(l, s), subst_proof(r, s)),
        Proof::AndElimL(q) => Proof::and_elim_l(subst_proof(q, s)),
        Proof::AndElimR(q) => Proof::and_elim_r(subst_proof(q, s)),
        Proof::OrIntroL { other, proof } => {
            Proof::or_intro_l(other.subst(s), subst_proof(proof, s))
        }
        Proof::OrIntroR { other, proof } => {
            Proof::or_intro_r(other.subst(s), subst_proof(proof, s))
        }
        Proof::OrElim {
            major,
            left_label,
            left,
            right_label,
            right,
        } => Proof::or_elim(
            subst_proof(major, s),
            left_label.clone(),
            subst_proof(left, s),
            right_label.clone(),
            subst_proof(right, s),
        ),
        Proof::ForallIntro { var, body } => {
            let (var, body) = subst_under_eigenvariable(var, body, s);
            Proof::forall_intro(var, body)
        }
        Proof::ForallElim { witness, proof } => {
            Proof::forall_elim(witness.subst(s), subst_proof(proof, s))
        }
        Proof::ExistsIntro {
            witness,
            target,
            proof,
        } => Proof::exists_intro(witness.subst(s), target.subst(s), subst_proof(proof, s)),
        Proof::ExistsElim {
            major,
            var,
            label,
            minor,
        } => {
            let major = subst_proof(major, s);
            let (var, minor) = subst_under_eigenvariable(var, minor, s);
            Proof::exists_elim(major, var, label.clone(), minor)
        }
        Proof::AbsurdElim { target, proof } => {
            Proof::absurd_elim(target.subst(s), subst_proof(proof, s))
        }
    }
}

fn subst_under_eigenvariable(var: &str, body: &Proof, s: &Subst) -> (String, Proof) {
    let idents = body.idents();
    let mut inner = Subst::new();
    for (k, t) in s.iter() {
        if k != var && idents.contains(k) {
            inner.insert(k.clone(), t.clone());
        }
    }
    if inner.is_empty() {
        return (var.to_string(), body.clone());
    }
    if inner.iter().any(|(_, t)| t.has_var(var)) {
        let mut avoid = idents;
        for (k, t) in inner.iter() {
            avoid.insert(k.clone());
            t.collect_idents(&mut avoid);
        }
        let fresh = fresh_var(&avoid);
        inner.insert(var.to_string(), Term::var(fresh.clone()));
        (fresh, subst_proof(body, &inner))
    } else {
        (var.to_string(), subst_proof(body, &inner))
    }
}

/// Replaces every `Hyp(label)` leaf by `q`.
pub fn subst_hyp(p: &Proof, label: &str, q: &Proof) -> Proof {
    let rebinds = |l: &str| l == label;
    match p {
        Proof::Hyp(l) if l == label => q.clone(),
        Proof::ImpIntro { label: l, .. } if rebinds(l) => p.clone(),
        _ => {
            let mut out = p.clone();
            match &mut out {
                Proof::OrElim {
                    major,
                    left_label,
                    left,
                    right_label,
                    right,
                } => {
                    **major = subst_hyp(major, label, q);
                    if left_label != label {
                        **left = subst_hyp(left, label, q);
                    }
                    if right_label != label {
                        **right = subst_hyp(right, label, q);
                    }
                }
                Proof::ExistsElim {
                    major,
                    label: l,
                    minor,
                    ..
                } => {
                    **major = subst_hyp(major, label, q);
                    if l != label {
                        **minor = subst_hyp(minor, label, q);
                    }
                }
                other => {
                    for c in other.children_mut() {
                        *c = subst_hyp(c, label, q);
                    }
                }
            }
            out
        }
    }
}

/// Renames every discharged label in `avoid_labels` and every
/// eigenvariable in `avoid_vars` to fresh names.
pub fn rename_binders(
    p: &Proof,
    avoid_labels: &BTreeSet<String>,
    avoid_vars: &BTreeSet<String>,
) -> Proof {
    let mut r = Renamer {
        avoid_labels,
        avoid_vars,
        taken_labels: avoid_labels.union(&p.labels()).cloned().collect(),
        taken_vars: avoid_vars.union(&p.idents()).cloned().collect(),
    };
    r.go(p)
}

struct Renamer<'a> {
    avoid_labels: &'a BTreeSet<String>,
    avoid_vars: &'a BTreeSet<String>,
    taken_labels: BTreeSet<String>,
    taken_vars: BTreeSet<String>,
}

impl Renamer<'_> {
    fn label(&mut self, l: &str, scope: &Proof) -> (String, Proof) {
        if !self.avoid_labels.contains(l) {
            return (l.to_string(), scope.clone());
        }
        let fresh = fresh_name("h", &self.taken_labels);
        self.taken_labels.insert(fresh.clone());
        let scope = subst_hyp(scope, l, &Proof::hyp(fresh.clone()));
        (fresh, scope)
    }

    fn var(&mut self, v: &str, scope: &Proof) -> (String, Proof) {
        if !self.avoid_vars.contains(v) {
            return (v.to_string(), scope.clone());
        }
        let fresh = fresh_var(&self.taken_vars);
        self.taken_vars.insert(fresh.clone());
        let scope = subst_proof(scope, &Subst::single(v, Term::var(fresh.clone())));
        (fresh, scope)
    }

    fn go(&mut self, p: &Proof) -> Proof {
        match p {
            Proof::ImpIntro { label, hyp, body } => {
                let (label, body) = self.label(label, body);
                Proof::imp_intro(label, hyp.clone(), self.go(&body))
            }
            Proof::OrElim {
                major,
                left_label,
                left,
                right_label,
                right,
            } => {
                let (ll, left) = self.label(left_label, left);
                let (rl, right) = self.label(right_label, right);
                Proof::or_elim(self.go(major), ll, self.go(&left), rl, self.go(&right))
            }
            Proof::ForallIntro { var, body } => {
                let (var, body) = self.var(var, body);
                Proof::forall_intro(var, self.go(&body))
            }
            Proof::ExistsElim {
                major,
                var,
                label,
                minor,
            } => {
                let (var, minor) = self.var(var, minor);
                let (label, minor) = self.label(label, &minor);
                Proof::exists_elim(self.go(major), var, label, self.go(&minor))
            }
            _ => {
                let mut out = p.clone();
                for c in out.children_mut() {
                    *c = self.go(c);
                }
                out
            }
        }
    }
}

/// Renames eigenvariables away from `avoid`. The derived sequent is
/// unchanged.
pub fn rename_eigenvariables(p: &Proof, avoid: &BTreeSet<String>) -> Proof {
    rename_binders(p, &BTreeSet::new(), avoid)
}

/// Admissible weakening: a proof of `Γ ⊢ C` becomes a proof of
/// `Γ, label: extra ⊢ C`.
pub fn weaken(
    p: &Proof,
    s: &Sequent,
    label: &str,
    extra: &Formula,
) -> Result<(Proof, Sequent), TransformError> {
    if s.context.contains_label(label) {
        return Err(TransformError::LabelClash(label.to_string()));
    }
    let mut ctx = Context::new();
    ctx.push(label, extra.clone());
    let p = weaken_by(p, &ctx);
    let mut context = s.context.clone();
    context.push(label, extra.clone());
    Ok((p, Sequent::new(context, s.conclusion.clone())))
}

/// Makes `p` valid under any context extended by `extra`, assuming the
/// labels of `extra` are not already open in `p`.
pub fn weaken_by(p: &Proof, extra: &Context) -> Proof {
    let labels: BTreeSet<String> = extra.labels().map(str::to_string).collect();
    let vars = extra.idents();
    rename_binders(p, &labels, &vars)
}

/// From a proof of `Γ ⊢ ∀x1…∀xk C` and terms `t1…tk`, a proof of
/// `Γ ⊢ (t̄/x̄)C`.
pub fn forall_elims(p: &Proof, ctx: &Context, terms: &[Term]) -> Result<Proof, TransformError> {
    if terms.is_empty() {
        return Ok(p.clone());
    }
    let concl = infer(p, ctx)?;
    let mut f = &concl;
    for _ in 0..terms.len() {
        match f {
            Formula::Forall(_, body) => f = body,
            _ => {
                return Err(TransformError::ShapeMismatch {
                    expected: terms.len(),
                    found: concl.clone(),
                })
            }
        }
    }
    Ok(terms
        .iter()
        .fold(p.clone(), |acc, t| Proof::forall_elim(t.clone(), acc)))
}
