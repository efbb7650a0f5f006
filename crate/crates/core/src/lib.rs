//! Calculus of neo-Peircean relations.
//!
//! Two-colored diagram terms over a monoidal signature, their semantics as
//! finite relations, a deep-inference proof kernel driven by a data manifest
//! of axiom schemas, and verified encodings from the calculus of binary
//! relations, first-order logic and predicate functor logic.

pub mod bridges;
pub mod catalog;
pub mod deduction;
pub mod derived;
pub mod error;
pub mod gen;
pub mod normalize;
pub mod oracle;
pub mod parse;
pub mod path;
pub mod pattern;
pub mod print;
pub mod proof;
pub mod rel;
pub mod signature;
pub mod sweep;
pub mod term;
pub mod theory;
pub mod ty;

pub use catalog::{AxiomSchema, RuleCatalog, RuleKind};
pub use error::Error;
pub use oracle::Verdict;
pub use path::Path;
pub use proof::{Direction, Proof, Step};
pub use rel::{Interpretation, Relation, Tuple};
pub use signature::Signature;
pub use term::{Color, GenKind, SugarFam, Term};
pub use theory::Theory;
pub use ty::InterfaceType;
