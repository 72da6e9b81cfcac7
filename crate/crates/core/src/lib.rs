//! Checking, normalization and deskolemization of first-order
//! intuitionistic natural-deduction proofs.

pub mod deskolem;
pub mod document;
pub mod instance;
pub mod kernel;
pub mod normalize;
pub mod oracle;
pub mod syntax;
pub mod transform;

pub use instance::{classify, f_terms_of, is_frozen, InstanceClass, SkolemSignature};
pub use kernel::{check, infer, Context, KernelError, Proof, Sequent};
pub use syntax::{fresh_var, Formula, Subst, Term};
