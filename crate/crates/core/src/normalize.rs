//! Cut elimination: detour and permutative conversions, leftmost-outermost
//! normalization, and an instance-level validator for the frozen-term
//! consequences of the subformula property.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::instance::{classify, InstanceClass, SkolemSignature};
use crate::kernel::{infer, judgements, Context, KernelError, NodePath, Proof, Sequent};
use crate::syntax::{fresh_var, Formula, Subst, Term};
use crate::transform::{rename_binders, subst_hyp, subst_proof};

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connective {
    Implies,
    And,
    Or,
    Forall,
    Exists,
}

/// The elimination-rule node standing as major premise in a permutative
/// redex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Permuted {
    OrElim,
    ExistsElim,
    AbsurdElim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedexKind {
    Detour(Connective),
    Permutative(Permuted),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub path: NodePath,
    pub kind: RedexKind,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.path, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("no {kind:?} redex at {path}")]
    InvalidRedexPath { path: NodePath, kind: RedexKind },
    #[error("normalization exceeded the budget of {0} steps")]
    StepBudgetExceeded(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Major premise of an elimination node; always child 0.
fn major_premise(p: &Proof) -> Option<&Proof> {
    match p {
        Proof::ImpElim { major, .. }
        | Proof::OrElim { major, .. }
        | Proof::ExistsElim { major, .. } => Some(major),
        Proof::AndElimL(q)
        | Proof::AndElimR(q)
        | Proof::ForallElim { proof: q, .. }
        | Proof::AbsurdElim { proof: q, .. } => Some(q),
        _ => None,
    }
}

pub fn redex_kind(p: &Proof) -> Option<RedexKind> {
    let m = major_premise(p)?;
    use Proof::*;
    let kind = match (p, m) {
        (ImpElim { .. }, ImpIntro { .. }) => RedexKind::Detour(Connective::Implies),
        (AndElimL(_) | AndElimR(_), AndIntro(..)) => RedexKind::Detour(Connective::And),
        (OrElim { .. }, OrIntroL { .. } | OrIntroR { .. }) => RedexKind::Detour(Connective::Or),
        (ForallElim { .. }, ForallIntro { .. }) => RedexKind::Detour(Connective::Forall),
        (ExistsElim { .. }, ExistsIntro { .. }) => RedexKind::Detour(Connective::Exists),
        (_, OrElim { .. }) => RedexKind::Permutative(Permuted::OrElim),
        (_, ExistsElim { .. }) => RedexKind::Permutative(Permuted::ExistsElim),
        (_, AbsurdElim { .. }) => RedexKind::Permutative(Permuted::AbsurdElim),
        _ => return None,
    };
    Some(kind)
}

/// All redexes, leftmost-outermost first.
pub fn find_redexes(p: &Proof) -> Vec<Redex> {
    fn go(p: &Proof, path: &mut Vec<usize>, out: &mut Vec<Redex>) {
        if let Some(kind) = redex_kind(p) {
            out.push(Redex {
                path: NodePath(path.clone()),
                kind,
            });
        }
        for (i, c) in p.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

fn first_redex(p: &Proof) -> Option<Redex> {
    fn go(p: &Proof, path: &mut Vec<usize>) -> Option<Redex> {
        if let Some(kind) = redex_kind(p) {
            return Some(Redex {
                path: NodePath(path.clone()),
                kind,
            });
        }
        for (i, c) in p.children().into_iter().enumerate() {
            path.push(i);
            if let Some(r) = go(c, path) {
                return Some(r);
            }
            path.pop();
        }
        None
    }
    go(p, &mut Vec::new())
}

pub fn is_normal(p: &Proof) -> bool {
    first_redex(p).is_none()
}

/// Context in force at the node at `path`.
fn context_at(p: &Proof, ctx: &Context, path: &[usize]) -> Result<Context, KernelError> {
    let mut ctx = ctx.clone();
    let mut node = p;
    for &i in path {
        match (node, i) {
            (Proof::ImpIntro { label, hyp, .. }, 0) => {
                ctx.push(label.clone(), hyp.clone());
            }
            (
                Proof::OrElim {
                    major,
                    left_label,
                    right_label,
                    ..
                },
                1 | 2,
            ) => {
                if let Formula::Or(a, b) = infer(major, &ctx)? {
                    let (l, f) = if i == 1 {
                        (left_label, *a)
                    } else {
                        (right_label, *b)
                    };
                    ctx.push(l.clone(), f);
                }
            }
            (
                Proof::ExistsElim {
                    major, var, label, ..
                },
                1,
            ) => {
                if let Formula::Exists(x, a) = infer(major, &ctx)? {
                    ctx.push(label.clone(), a.instantiate(&x, &Term::var(var.clone())));
                }
            }
            _ => {}
        }
        node = node.children()[i];
    }
    Ok(ctx)
}

fn replace_at(p: &mut Proof, path: &[usize], new: Proof) {
    match path.split_first() {
        None => *p = new,
        Some((i, rest)) => replace_at(p.children_mut().swap_remove(*i), rest, new),
    }
}

/// Names a freshened copy of a subproof must avoid.
struct Avoid {
    labels: BTreeSet<String>,
    idents: BTreeSet<String>,
}

impl Avoid {
    fn of(p: &Proof, ctx: &Context) -> Avoid {
        let mut labels = p.labels();
        labels.extend(ctx.labels().map(str::to_string));
        let mut idents = p.idents();
        idents.extend(ctx.idents());
        Avoid { labels, idents }
    }

    /// Renames every binder of `q` that is already used somewhere.
    fn freshen(&self, q: &Proof) -> Proof {
        rename_binders(q, &self.labels, &self.idents)
    }
}

const HOLE: &str = "__hole";

/// Contracts the redex `r` of `p`; the result derives the same sequent.
pub fn reduce_once(p: &Proof, ctx: &Context, r: &Redex) -> Result<Proof, NormalizeError> {
    let invalid = || NormalizeError::InvalidRedexPath {
        path: r.path.clone(),
        kind: r.kind,
    };
    let node = p.subproof(&r.path.0).ok_or_else(invalid)?;
    if redex_kind(node) != Some(r.kind) {
        return Err(invalid());
    }
    let local = context_at(p, ctx, &r.path.0)?;
    let avoid = Avoid::of(p, ctx);
    let contractum = contract(node, &local, &avoid)?;
    let mut out = p.clone();
    replace_at(&mut out, &r.path.0, contractum);
    Ok(out)
}

fn contract(node: &Proof, ctx: &Context, avoid: &Avoid) -> Result<Proof, NormalizeError> {
    use Proof::*;
    let major = major_premise(node).expect("redex is an elimination");
    let out = match (node, major) {
        (ImpElim { minor, .. }, ImpIntro { label, body, .. }) => {
            subst_hyp(body, label, &avoid.freshen(minor))
        }
        (AndElimL(_), AndIntro(l, _)) => (**l).clone(),
        (AndElimR(_), AndIntro(_, r)) => (**r).clone(),
        (
            OrElim {
                left_label, left, ..
            },
            OrIntroL { proof, .. },
        ) => subst_hyp(left, left_label, &avoid.freshen(proof)),
        (
            OrElim {
                right_label, right, ..
            },
            OrIntroR { proof, .. },
        ) => subst_hyp(right, right_label, &avoid.freshen(proof)),
        (ForallElim { witness, .. }, ForallIntro { var, body }) => {
            subst_proof(body, &Subst::single(var.clone(), witness.clone()))
        }
        (
            ExistsElim {
                var, label, minor, ..
            },
            ExistsIntro { witness, proof, .. },
        ) => {
            let minor = subst_proof(minor, &Subst::single(var.clone(), witness.clone()));
            subst_hyp(&minor, label, &avoid.freshen(proof))
        }
        (_, AbsurdElim { proof, .. }) => {
            let target = infer(node, ctx)?;
            Proof::absurd_elim(target, (**proof).clone())
        }
        (
            _,
            OrElim {
                major: m,
                left_label,
                left,
                right_label,
                right,
            },
        ) => {
            let template = avoid.freshen(&with_hole(node));
            Proof::or_elim(
                (**m).clone(),
                left_label.clone(),
                subst_hyp(&template, HOLE, left),
                right_label.clone(),
                subst_hyp(&template, HOLE, right),
            )
        }
        (
            _,
            ExistsElim {
                major: m,
                var,
                label,
                minor,
            },
        ) => {
            let template = avoid.freshen(&with_hole(node));
            let (var, minor) = if template.idents().contains(var) {
                let mut taken = avoid.idents.clone();
                taken.extend(template.idents());
                let fresh = fresh_var(&taken);
                let minor =
                    subst_proof(minor, &Subst::single(var.clone(), Term::var(fresh.clone())));
                (fresh, minor)
            } else {
                (var.clone(), (**minor).clone())
            };
            Proof::exists_elim(
                (**m).clone(),
                var,
                label.clone(),
                subst_hyp(&template, HOLE, &minor),
            )
        }
        _ => unreachable!("redex_kind agreed on this node"),
    };
    Ok(out)
}

/// The elimination node with its major premise replaced by a hole.
fn with_hole(node: &Proof) -> Proof {
    let mut t = node.clone();
    *t.children_mut().swap_remove(0) = Proof::hyp(HOLE);
    t
}

/// Leftmost-outermost normalization with a step budget.
pub fn normalize_with_budget(
    p: &Proof,
    ctx: &Context,
    budget: usize,
) -> Result<Proof, NormalizeError> {
    let mut p = p.clone();
    let mut steps = 0;
    while let Some(r) = first_redex(&p) {
        if steps == budget {
            return Err(NormalizeError::StepBudgetExceeded(budget));
        }
        p = reduce_once(&p, ctx, &r)?;
        steps += 1;
    }
    Ok(p)
}

pub fn normalize(p: &Proof, ctx: &Context) -> Result<Proof, NormalizeError> {
    normalize_with_budget(p, ctx, DEFAULT_STEP_BUDGET)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrozenPropagation {
    Pass,
    /// The end sequent does not have all Skolem terms frozen (apart from
    /// partial-instance hypotheses), so nothing is claimed.
    NotApplicable,
    Fail {
        path: NodePath,
        formula: Formula,
    },
}

/// Checks that every formula of a normal proof is a partial instance of
/// the Skolem axiom or has all its Skolem terms frozen, provided the end
/// sequent has that property.
pub fn validate_frozen_propagation(
    p: &Proof,
    s: &Sequent,
    sig: &SkolemSignature,
) -> Result<FrozenPropagation, KernelError> {
    let ok = |f: &Formula| classify(f, sig) != InstanceClass::HasUnfrozen;
    if !s.context.formulas().all(ok) || !classify(&s.conclusion, sig).is_frozen() {
        return Ok(FrozenPropagation::NotApplicable);
    }
    for j in judgements(p, &s.context)? {
        if !ok(&j.conclusion) {
            return Ok(FrozenPropagation::Fail {
                path: j.path,
                formula: j.conclusion,
            });
        }
        if let Some(f) = j.context.formulas().find(|f| !ok(f)) {
            return Ok(FrozenPropagation::Fail {
                path: j.path,
                formula: f.clone(),
            });
        }
    }
    Ok(FrozenPropagation::Pass)
}
