use crate::error::{Error, Result};
use crate::path::Path;
use crate::signature::Signature;
use crate::term::{Color, Term};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The type `dom -> cod` of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterfaceType {
    pub dom: u32,
    pub cod: u32,
}

impl InterfaceType {
    pub fn new(dom: u32, cod: u32) -> Self {
        InterfaceType { dom, cod }
    }
}

impl fmt::Display for InterfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.dom, self.cod)
    }
}

/// Syntax-directed typing. Composition demands interface agreement and the
/// same colour is not required between the operator and its arguments (mixed
/// terms like `a ;+ (b ;- c)` are well-formed).
pub fn typecheck(t: &Term, sig: &Signature) -> Result<InterfaceType> {
    check_at(t, sig, &Path::root())
}

fn check_at(t: &Term, sig: &Signature, at: &Path) -> Result<InterfaceType> {
    match t {
        Term::Gen(k, _) => {
            let (d, c) = k.arity();
            Ok(InterfaceType::new(d, c))
        }
        Term::Rel(name, color) => {
            let st = sig.get(name)?;
            Ok(match color {
                Color::White => InterfaceType::new(st.ar, st.coar),
                Color::Black => InterfaceType::new(st.coar, st.ar),
            })
        }
        Term::Seq(_, l, r) => {
            let lt = check_at(l, sig, &at.child(0))?;
            let rt = check_at(r, sig, &at.child(1))?;
            if lt.cod != rt.dom {
                return Err(Error::TypeMismatch {
                    path: at.clone(),
                    msg: format!("composition interface disagreement: {} vs {}", lt.cod, rt.dom),
                });
            }
            Ok(InterfaceType::new(lt.dom, rt.cod))
        }
        Term::Tensor(_, l, r) => {
            let lt = check_at(l, sig, &at.child(0))?;
            let rt = check_at(r, sig, &at.child(1))?;
            Ok(InterfaceType::new(lt.dom + rt.dom, lt.cod + rt.cod))
        }
        Term::Sugar(..) => {
            // Sugar types are computed without expansion.
            let ty = sugar_type(t);
            Ok(ty)
        }
    }
}

fn sugar_type(t: &Term) -> InterfaceType {
    use crate::term::SugarFam::*;
    match t {
        Term::Sugar(fam, _, n, m) => match fam {
            CopierN => InterfaceType::new(*n, 2 * n),
            DiscardN => InterfaceType::new(*n, 0),
            CocopierN => InterfaceType::new(2 * n, *n),
            CodiscardN => InterfaceType::new(0, *n),
            IdN => InterfaceType::new(*n, *n),
            SymmNM => {
                let m = m.unwrap_or(0);
                InterfaceType::new(n + m, m + n)
            }
        },
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn sig() -> Signature {
        Signature::new().with("R", 1, 1).with("S", 1, 1)
    }

    #[test]
    fn copier_type() {
        let t = parse("cp+").unwrap();
        assert_eq!(typecheck(&t, &sig()).unwrap(), InterfaceType::new(1, 2));
    }

    #[test]
    fn meet_of_symbols() {
        // (cp+ ;+ (R^o *+ S^o)) ;+ cc+ : 1 -> 1, Example term for meet
        let t = parse("(cp+ ;+ (R^o *+ S^o)) ;+ cc+").unwrap();
        assert_eq!(typecheck(&t, &sig()).unwrap(), InterfaceType::new(1, 1));
    }

    #[test]
    fn mismatch_carries_path() {
        let t = parse("cp+ ;+ dc+").unwrap();
        match typecheck(&t, &sig()) {
            Err(Error::TypeMismatch { path, .. }) => assert_eq!(path, Path::root()),
            other => panic!("expected TypeMismatch, got {other:?}"),
        }
    }

    #[test]
    fn black_rel_reverses() {
        let sig = Signature::new().with("R", 2, 0);
        let t = parse("R^b").unwrap();
        assert_eq!(typecheck(&t, &sig).unwrap(), InterfaceType::new(0, 2));
    }

    #[test]
    fn unknown_symbol() {
        let t = parse("Q^o").unwrap();
        assert!(matches!(typecheck(&t, &sig()), Err(Error::UnknownSymbol(_))));
    }
}
