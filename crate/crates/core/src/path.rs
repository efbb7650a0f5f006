use crate::error::{Error, Result};
use crate::term::Term;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Address of a subterm: child indices (0 = left, 1 = right) from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, i: u8) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn join(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

pub fn subterm_at<'a>(t: &'a Term, p: &Path) -> Result<&'a Term> {
    let mut cur = t;
    for &i in &p.0 {
        cur = match (cur, i) {
            (Term::Seq(_, l, _), 0) | (Term::Tensor(_, l, _), 0) => l,
            (Term::Seq(_, _, r), 1) | (Term::Tensor(_, _, r), 1) => r,
            _ => return Err(Error::InvalidPath { path: p.clone() }),
        };
    }
    Ok(cur)
}

/// Replace the subterm at `p` with `s`. The caller is responsible for the
/// interface-type side condition; `proof::apply_step` checks it.
pub fn replace_at(t: &Term, p: &Path, s: Term) -> Result<Term> {
    fn go(t: &Term, rest: &[u8], s: Term) -> Result<Term> {
        match rest.split_first() {
            None => Ok(s),
            Some((&i, tail)) => match (t, i) {
                (Term::Seq(c, l, r), 0) => Ok(Term::seq(*c, go(l, tail, s)?, (**r).clone())),
                (Term::Seq(c, l, r), 1) => Ok(Term::seq(*c, (**l).clone(), go(r, tail, s)?)),
                (Term::Tensor(c, l, r), 0) => Ok(Term::tensor(*c, go(l, tail, s)?, (**r).clone())),
                (Term::Tensor(c, l, r), 1) => Ok(Term::tensor(*c, (**l).clone(), go(r, tail, s)?)),
                _ => Err(Error::InvalidPath {
                    path: Path(rest.to_vec()),
                }),
            },
        }
    }
    go(t, &p.0, s).map_err(|e| match e {
        Error::InvalidPath { .. } => Error::InvalidPath { path: p.clone() },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Color, GenKind, Term};

    #[test]
    fn subterm_and_replace() {
        let a = Term::Gen(GenKind::Copier, Color::White);
        let b = Term::Gen(GenKind::Cocopier, Color::White);
        let t = Term::seqw(a.clone(), b.clone());
        assert_eq!(subterm_at(&t, &Path(vec![1])).unwrap(), &b);
        let t2 = replace_at(&t, &Path(vec![0]), a.clone()).unwrap();
        assert_eq!(t2, t);
        assert!(subterm_at(&t, &Path(vec![0, 0])).is_err());
    }
}
