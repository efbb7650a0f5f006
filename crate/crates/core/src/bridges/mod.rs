//! Front-end syntaxes with encoders into diagram terms: the calculus of
//! binary relations, typed first-order logic (with the reverse decoder), and
//! predicate functor logic.

pub mod cr;
pub mod fol;
pub mod pfl;
