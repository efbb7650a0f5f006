//! Quine's predicate functor logic: typing, truncated stream semantics, and
//! the encoding into diagram terms.
//!
//! The published semantics works over streams; every predicate's membership
//! depends only on its first `arity` coordinates, so the evaluator computes
//! exact tables at the arity and expands to length-N prefixes on demand.
//! The crop functor `]` is read existentially, following the encoding
//! diagram; the literal tail-shift clause disagrees with it on predicates of
//! nonzero arity (see the `crop_readings_differ` test).

use crate::error::{Error, Result};
use crate::rel::{Interpretation, Relation, Tuple};
use crate::term::{Color, GenKind, SugarFam, Term};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred {
    Sym(String),
    /// The identity predicate `I : 2`.
    I,
    /// Minor inversion `p P`: swap the first two coordinates.
    Minor(Box<Pred>),
    /// Major inversion `P* P`: rotate the first `arity` coordinates.
    Major(Box<Pred>),
    /// Padding `[ P`: shift up, first coordinate free.
    Pad(Box<Pred>),
    /// Cropping `] P`: existential quantification over the first coordinate.
    Crop(Box<Pred>),
    Cap(Box<Pred>, Box<Pred>),
    Neg(Box<Pred>),
}

/// The arity derivable from the typing rules.
pub fn pfl_arity(p: &Pred, sig: &crate::signature::Signature) -> Result<u32> {
    Ok(match p {
        Pred::I => 2,
        Pred::Sym(name) => {
            let st = sig.get(name)?;
            if st.coar != 0 {
                return Err(Error::Untypable(format!(
                    "PFL symbol `{name}` must have coarity 0"
                )));
            }
            st.ar
        }
        Pred::Minor(q) => {
            let n = pfl_arity(q, sig)?;
            if n >= 2 {
                n
            } else {
                2
            }
        }
        Pred::Major(q) => pfl_arity(q, sig)?,
        Pred::Pad(q) => pfl_arity(q, sig)? + 1,
        Pred::Crop(q) => {
            let n = pfl_arity(q, sig)?;
            if n == 0 {
                0
            } else {
                n - 1
            }
        }
        Pred::Cap(a, b) => pfl_arity(a, sig)?.max(pfl_arity(b, sig)?),
        Pred::Neg(q) => pfl_arity(q, sig)?,
    })
}

pub fn max_arity(p: &Pred, sig: &crate::signature::Signature) -> Result<u32> {
    let own = pfl_arity(p, sig)?;
    let sub = match p {
        Pred::Minor(q) | Pred::Major(q) | Pred::Pad(q) | Pred::Crop(q) | Pred::Neg(q) => {
            max_arity(q, sig)?
        }
        Pred::Cap(a, b) => max_arity(a, sig)?.max(max_arity(b, sig)?),
        _ => 0,
    };
    Ok(own.max(sub))
}

/// Exact table of `arity(p)`-tuples satisfying the predicate.
fn table(p: &Pred, interp: &Interpretation, sig: &crate::signature::Signature) -> Result<BTreeSet<Tuple>> {
    let size = interp.domain_size;
    Ok(match p {
        Pred::Sym(name) => interp
            .get(name)?
            .pairs
            .iter()
            .map(|(x, _)| x.clone())
            .collect(),
        Pred::I => (0..size).map(|x| vec![x, x]).collect(),
        Pred::Cap(a, b) => {
            let na = pfl_arity(a, sig)?;
            let nb = pfl_arity(b, sig)?;
            let ta = table(a, interp, sig)?;
            let tb = table(b, interp, sig)?;
            let n = na.max(nb);
            Relation::tuples(size, n)
                .into_iter()
                .filter(|t| {
                    ta.contains(&t[..na as usize].to_vec()) && tb.contains(&t[..nb as usize].to_vec())
                })
                .collect()
        }
        Pred::Neg(q) => {
            let n = pfl_arity(q, sig)?;
            let tq = table(q, interp, sig)?;
            Relation::tuples(size, n)
                .into_iter()
                .filter(|t| !tq.contains(t))
                .collect()
        }
        Pred::Minor(q) => {
            let n = pfl_arity(q, sig)?;
            let tq = table(q, interp, sig)?;
            if n >= 2 {
                tq.into_iter()
                    .map(|mut t| {
                        t.swap(0, 1);
                        t
                    })
                    .collect()
            } else {
                // pP : 2 for P : 1 or P : 0 — membership reads coordinate 2
                // (for arity 1) or nothing
                Relation::tuples(size, 2)
                    .into_iter()
                    .filter(|t| {
                        if n == 1 {
                            tq.contains(&vec![t[1]])
                        } else {
                            tq.contains(&vec![])
                        }
                    })
                    .collect()
            }
        }
        Pred::Major(q) => {
            let n = pfl_arity(q, sig)? as usize;
            let tq = table(q, interp, sig)?;
            if n < 2 {
                tq
            } else {
                // tau_n . tau_2 .. tau_{n-1} . tau_1 in P
                Relation::tuples(size, n as u32)
                    .into_iter()
                    .filter(|t| {
                        let mut u = t.clone();
                        u[0] = t[n - 1];
                        u[n - 1] = t[0];
                        tq.contains(&u)
                    })
                    .collect()
            }
        }
        Pred::Pad(q) => {
            let tq = table(q, interp, sig)?;
            let mut out = BTreeSet::new();
            for x in 0..size {
                for t in &tq {
                    let mut u = vec![x];
                    u.extend_from_slice(t);
                    out.insert(u);
                }
            }
            out
        }
        Pred::Crop(q) => {
            let n = pfl_arity(q, sig)?;
            let tq = table(q, interp, sig)?;
            if n == 0 {
                tq
            } else {
                // existential reading, as in the encoding diagram
                tq.into_iter().map(|t| t[1..].to_vec()).collect()
            }
        }
    })
}

/// Truncated semantics: the set of length-`width` prefixes.
pub fn pfl_eval_trunc(
    p: &Pred,
    interp: &Interpretation,
    sig: &crate::signature::Signature,
    width: u32,
) -> Result<BTreeSet<Tuple>> {
    let need = max_arity(p, sig)? + 2;
    if width < need {
        return Err(Error::TruncationTooSmall {
            n: width as usize,
            need: need as usize,
        });
    }
    let n = pfl_arity(p, sig)?;
    let t = table(p, interp, sig)?;
    let size = interp.domain_size;
    let mut out = BTreeSet::new();
    for prefix in t {
        for tail in Relation::tuples(size, width - n) {
            let mut full = prefix.clone();
            full.extend_from_slice(&tail);
            out.insert(full);
        }
    }
    Ok(out)
}

/// The permutation block swapping wires 1 and n:
/// `sw@1,(n-1) ; (sw@(n-2),1 (x) id)` for n >= 2, the identity below.
fn rotation(n: u32) -> Term {
    let w = Color::White;
    if n < 2 {
        return Term::sugar(SugarFam::IdN, w, n, None);
    }
    Term::seq(
        w,
        Term::sugar(SugarFam::SymmNM, w, 1, Some(n - 1)),
        Term::tensor(
            w,
            Term::sugar(SugarFam::SymmNM, w, n - 2, Some(1)),
            Term::Gen(GenKind::Id1, w),
        ),
    )
}

/// The encoding into diagram terms `arity -> 0`, under the lift that sends
/// each PFL symbol of arity n to a diagram symbol `n -> 0`.
pub fn pfl_encode(p: &Pred, sig: &crate::signature::Signature) -> Result<Term> {
    let w = Color::White;
    Ok(match p {
        Pred::Sym(name) => {
            pfl_arity(p, sig)?;
            Term::rel(name, w)
        }
        // the white cap: merge the two wires, then delete
        Pred::I => Term::seq(
            w,
            Term::Gen(GenKind::Cocopier, w),
            Term::Gen(GenKind::Discard, w),
        ),
        Pred::Minor(q) => {
            let n = pfl_arity(q, sig)?;
            let inner = pfl_encode(q, sig)?;
            if n >= 2 {
                Term::seq(
                    w,
                    Term::tensor(
                        w,
                        Term::Gen(GenKind::Symm, w),
                        Term::sugar(SugarFam::IdN, w, n - 2, None),
                    ),
                    inner,
                )
            } else if n == 1 {
                // pP : 2 reads its second wire
                Term::seq(
                    w,
                    Term::tensor(w, Term::Gen(GenKind::Discard, w), Term::Gen(GenKind::Id1, w)),
                    inner,
                )
            } else {
                Term::seq(w, Term::sugar(SugarFam::DiscardN, w, 2, None), inner)
            }
        }
        Pred::Major(q) => {
            let n = pfl_arity(q, sig)?;
            Term::seq(w, rotation(n), pfl_encode(q, sig)?)
        }
        Pred::Pad(q) => {
            let inner = pfl_encode(q, sig)?;
            Term::seq(
                w,
                Term::tensor(
                    w,
                    Term::Gen(GenKind::Discard, w),
                    Term::sugar(SugarFam::IdN, w, pfl_arity(q, sig)?, None),
                ),
                inner,
            )
        }
        Pred::Crop(q) => {
            let n = pfl_arity(q, sig)?;
            let inner = pfl_encode(q, sig)?;
            if n == 0 {
                inner
            } else {
                Term::seq(
                    w,
                    Term::tensor(
                        w,
                        Term::Gen(GenKind::Codiscard, w),
                        Term::sugar(SugarFam::IdN, w, n - 1, None),
                    ),
                    inner,
                )
            }
        }
        Pred::Cap(a, b) => {
            let na = pfl_arity(a, sig)?;
            let nb = pfl_arity(b, sig)?;
            let n = na.max(nb);
            let ea = pad_to(pfl_encode(a, sig)?, na, n);
            let eb = pad_to(pfl_encode(b, sig)?, nb, n);
            Term::seq(
                w,
                Term::sugar(SugarFam::CopierN, w, n, None),
                Term::tensor(w, ea, eb),
            )
        }
        Pred::Neg(q) => crate::derived::negate(&pfl_encode(q, sig)?, sig)?,
    })
}

/// Feed the first `have` of `want` wires to `t`, discarding the rest.
fn pad_to(t: Term, have: u32, want: u32) -> Term {
    if have == want {
        return t;
    }
    let w = Color::White;
    Term::seq(
        w,
        Term::tensor(
            w,
            Term::sugar(SugarFam::IdN, w, have, None),
            Term::sugar(SugarFam::DiscardN, w, want - have, None),
        ),
        t,
    )
}

/// PFL text: prefix `p`, `P*`, `[`, `]`, `!`, infix `&`, atoms `I` and
/// symbol names.
pub fn parse_pfl(text: &str) -> Result<Pred> {
    let mut p = PflParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct PflParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PflParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Pred> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'&') {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = Pred::Cap(Box::new(acc), Box::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Pred> {
        self.skip_ws();
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Pred::Neg(Box::new(self.unary()?)))
            }
            Some(b'[') => {
                self.pos += 1;
                Ok(Pred::Pad(Box::new(self.unary()?)))
            }
            Some(b']') => {
                self.pos += 1;
                Ok(Pred::Crop(Box::new(self.unary()?)))
            }
            Some(b'p') if !self.ident_at(self.pos + 1) => {
                self.pos += 1;
                Ok(Pred::Minor(Box::new(self.unary()?)))
            }
            Some(b'P') if self.src.get(self.pos + 1) == Some(&b'*') => {
                self.pos += 2;
                Ok(Pred::Major(Box::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }

    fn ident_at(&self, pos: usize) -> bool {
        matches!(self.src.get(pos), Some(c) if c.is_ascii_alphanumeric() || *c == b'_')
    }

    fn atom(&mut self) -> Result<Pred> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.expr()?;
            self.skip_ws();
            if self.peek() != Some(b')') {
                return Err(self.err("expected `)`"));
            }
            self.pos += 1;
            return Ok(e);
        }
        let start = self.pos;
        while self.ident_at(self.pos) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a predicate"));
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if word == "I" {
            Ok(Pred::I)
        } else {
            Ok(Pred::Sym(word.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel::eval;
    use crate::signature::Signature;

    fn sig() -> Signature {
        Signature::new().with("R", 2, 0).with("Q", 1, 0)
    }

    fn lift() -> Interpretation {
        // rho_p(R) = {(x, star) | x in rho(R)}
        let mut r = Relation::empty(2, 0);
        r.pairs.insert((vec![0, 1], vec![]));
        r.pairs.insert((vec![1, 1], vec![]));
        let mut q = Relation::empty(1, 0);
        q.pairs.insert((vec![1], vec![]));
        Interpretation::new(2).with("R", r).with("Q", q)
    }

    #[test]
    fn typing_rules() {
        let s = sig();
        assert_eq!(pfl_arity(&Pred::I, &s).unwrap(), 2);
        assert_eq!(pfl_arity(&parse_pfl("] ] R").unwrap(), &s).unwrap(), 0);
        // Cap(P:1, Q:3) -> 3
        let p = Pred::Cap(
            Box::new(Pred::Sym("Q".into())),
            Box::new(Pred::Pad(Box::new(Pred::Sym("R".into())))),
        );
        assert_eq!(pfl_arity(&p, &s).unwrap(), 3);
        // ] of P : 0 stays 0
        let z = Pred::Crop(Box::new(Pred::Crop(Box::new(Pred::Crop(Box::new(
            Pred::Sym("Q".into()),
        ))))));
        assert_eq!(pfl_arity(&z, &s).unwrap(), 0);
    }

    #[test]
    fn agreement_with_encoding() {
        let s = sig();
        let i = lift();
        for text in [
            "R", "I", "p R", "P* R", "[ Q", "] R", "R & Q", "! Q", "p p R", "] [ Q", "p I & R",
        ] {
            let p = parse_pfl(text).unwrap();
            let n = pfl_arity(&p, &s).unwrap();
            let enc = pfl_encode(&p, &s).unwrap();
            let rel = eval(&enc, &i).unwrap();
            let width = max_arity(&p, &s).unwrap() + 2;
            let trunc = pfl_eval_trunc(&p, &i, &s, width).unwrap();
            for tau in Relation::tuples(i.domain_size, width) {
                let in_trunc = trunc.contains(&tau);
                let in_enc = rel.contains(&tau[..n as usize].to_vec(), &vec![]);
                assert_eq!(in_trunc, in_enc, "{text} at {tau:?}");
            }
        }
    }

    #[test]
    fn negation_is_complement_within_prefix_space() {
        let s = sig();
        let i = lift();
        let p = parse_pfl("! Q").unwrap();
        let width = 3;
        let t = pfl_eval_trunc(&p, &i, &s, width).unwrap();
        let tq = pfl_eval_trunc(&parse_pfl("Q").unwrap(), &i, &s, width).unwrap();
        let all: BTreeSet<_> = Relation::tuples(i.domain_size, width).into_iter().collect();
        let expect: BTreeSet<_> = all.difference(&tq).cloned().collect();
        assert_eq!(t, expect);
    }

    #[test]
    fn minor_involution_on_arity_ge_2() {
        let s = sig();
        let i = lift();
        let p = parse_pfl("p p R").unwrap();
        let q = parse_pfl("R").unwrap();
        assert_eq!(
            pfl_eval_trunc(&p, &i, &s, 4).unwrap(),
            pfl_eval_trunc(&q, &i, &s, 4).unwrap()
        );
    }

    /// The published tail-shift clause for `]` disagrees with the encoding
    /// diagram on predicates of nonzero arity: for `] I` the shift reading
    /// compares coordinates 2 and 3 while the diagram gives the always-true
    /// unary predicate. The evaluator follows the diagram.
    #[test]
    fn crop_readings_differ() {
        let s = Signature::new();
        let i = Interpretation::new(2);
        let p = Pred::Crop(Box::new(Pred::I));
        let width = 4;
        let ours = pfl_eval_trunc(&p, &i, &s, width).unwrap();
        assert_eq!(ours.len(), 16, "existential reading: all tuples");
        let shift: BTreeSet<Tuple> = Relation::tuples(2, width)
            .into_iter()
            .filter(|t| t[1] == t[2])
            .collect();
        assert_ne!(ours, shift);
    }

    #[test]
    fn truncation_too_small() {
        let s = sig();
        let i = lift();
        assert!(matches!(
            pfl_eval_trunc(&parse_pfl("R").unwrap(), &i, &s, 1),
            Err(Error::TruncationTooSmall { .. })
        ));
    }
}
