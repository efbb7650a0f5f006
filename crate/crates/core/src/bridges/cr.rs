//! The calculus of binary relations and its encoding into diagram terms.

use crate::derived::{dagger, negate};
use crate::error::{Error, Result};
use crate::rel::{compose_black, compose_white, Interpretation, Relation};
use crate::signature::Signature;
use crate::term::{Color, GenKind, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CRExpr {
    Sym(String),
    IdW,
    IdB,
    SeqW(Box<CRExpr>, Box<CRExpr>),
    SeqB(Box<CRExpr>, Box<CRExpr>),
    Top,
    Bot,
    Cap(Box<CRExpr>, Box<CRExpr>),
    Cup(Box<CRExpr>, Box<CRExpr>),
    Op(Box<CRExpr>),
    Neg(Box<CRExpr>),
}

fn binary_rel(interp: &Interpretation, name: &str) -> Result<Relation> {
    let r = interp.get(name)?;
    if r.dom_arity != 1 || r.cod_arity != 1 {
        return Err(Error::ArityMismatch(format!(
            "CR symbol `{name}` must be binary (1 -> 1)"
        )));
    }
    Ok(r.clone())
}

/// The semantic clauses, verbatim.
pub fn cr_eval(e: &CRExpr, interp: &Interpretation) -> Result<Relation> {
    let size = interp.domain_size;
    Ok(match e {
        CRExpr::Sym(name) => binary_rel(interp, name)?,
        CRExpr::IdW => {
            let mut r = Relation::empty(1, 1);
            for x in 0..size {
                r.pairs.insert((vec![x], vec![x]));
            }
            r
        }
        CRExpr::IdB => {
            let mut r = Relation::empty(1, 1);
            for x in 0..size {
                for y in 0..size {
                    if x != y {
                        r.pairs.insert((vec![x], vec![y]));
                    }
                }
            }
            r
        }
        CRExpr::Top => Relation::full(size, 1, 1),
        CRExpr::Bot => Relation::empty(1, 1),
        CRExpr::SeqW(a, b) => compose_white(&cr_eval(a, interp)?, &cr_eval(b, interp)?)?,
        CRExpr::SeqB(a, b) => compose_black(&cr_eval(a, interp)?, &cr_eval(b, interp)?, size)?,
        CRExpr::Cap(a, b) => {
            let ra = cr_eval(a, interp)?;
            let rb = cr_eval(b, interp)?;
            Relation {
                dom_arity: 1,
                cod_arity: 1,
                pairs: ra.pairs.intersection(&rb.pairs).cloned().collect(),
            }
        }
        CRExpr::Cup(a, b) => {
            let ra = cr_eval(a, interp)?;
            let rb = cr_eval(b, interp)?;
            Relation {
                dom_arity: 1,
                cod_arity: 1,
                pairs: ra.pairs.union(&rb.pairs).cloned().collect(),
            }
        }
        CRExpr::Op(a) => cr_eval(a, interp)?.converse(),
        CRExpr::Neg(a) => cr_eval(a, interp)?.complement(size),
    })
}

/// Symbols occurring in the expression; all are constrained to ar = coar = 1.
pub fn cr_signature(e: &CRExpr, sig: &mut Signature) {
    match e {
        CRExpr::Sym(name) => sig.insert(name, 1, 1),
        CRExpr::SeqW(a, b) | CRExpr::SeqB(a, b) | CRExpr::Cap(a, b) | CRExpr::Cup(a, b) => {
            cr_signature(a, sig);
            cr_signature(b, sig);
        }
        CRExpr::Op(a) | CRExpr::Neg(a) => cr_signature(a, sig),
        _ => {}
    }
}

/// The encoding into diagram terms, clause by clause: meets become white
/// copier sandwiches, joins black ones, top and bottom the discharger
/// composites, converse the Frobenius wiring, complement the derived negation.
pub fn cr_encode(e: &CRExpr) -> Result<Term> {
    // dagger/negate need a signature covering the symbols
    let mut sig = Signature::new();
    cr_signature(e, &mut sig);
    encode(e, &sig)
}

fn encode(e: &CRExpr, sig: &Signature) -> Result<Term> {
    let w = Color::White;
    let b = Color::Black;
    Ok(match e {
        CRExpr::Sym(name) => Term::rel(name, w),
        CRExpr::IdW => Term::Gen(GenKind::Id1, w),
        CRExpr::IdB => Term::Gen(GenKind::Id1, b),
        CRExpr::SeqW(x, y) => Term::seq(w, encode(x, sig)?, encode(y, sig)?),
        CRExpr::SeqB(x, y) => Term::seq(b, encode(x, sig)?, encode(y, sig)?),
        CRExpr::Top => Term::seq(w, Term::Gen(GenKind::Discard, w), Term::Gen(GenKind::Codiscard, w)),
        CRExpr::Bot => Term::seq(b, Term::Gen(GenKind::Discard, b), Term::Gen(GenKind::Codiscard, b)),
        CRExpr::Cap(x, y) => Term::seq(
            w,
            Term::Gen(GenKind::Copier, w),
            Term::seq(
                w,
                Term::tensor(w, encode(x, sig)?, encode(y, sig)?),
                Term::Gen(GenKind::Cocopier, w),
            ),
        ),
        CRExpr::Cup(x, y) => Term::seq(
            b,
            Term::Gen(GenKind::Copier, b),
            Term::seq(
                b,
                Term::tensor(b, encode(x, sig)?, encode(y, sig)?),
                Term::Gen(GenKind::Cocopier, b),
            ),
        ),
        CRExpr::Op(x) => dagger(&encode(x, sig)?, w, sig)?,
        CRExpr::Neg(x) => negate(&encode(x, sig)?, sig)?,
    })
}

/// CR text syntax: `R`, `id+`, `id-`, `top`, `bot`, infix `;+ ;- & |`
/// (chains of one operator, right associated), prefix `~`, postfix `^`.
pub fn parse_cr(text: &str) -> Result<CRExpr> {
    let mut p = CrParser {
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

struct CrParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> CrParser<'a> {
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

    fn expr(&mut self) -> Result<CRExpr> {
        let first = self.unary()?;
        self.skip_ws();
        let Some(op) = self.try_operator()? else {
            return Ok(first);
        };
        let mut parts = vec![first, self.unary()?];
        loop {
            self.skip_ws();
            let save = self.pos;
            match self.try_operator()? {
                Some(next) if next == op => parts.push(self.unary()?),
                Some(_) => {
                    self.pos = save;
                    return Err(self.err("mixed CR operators need parentheses"));
                }
                None => break,
            }
        }
        let mut it = parts.into_iter().rev();
        let last = it.next().unwrap();
        Ok(it.fold(last, |acc, x| match op {
            b'w' => CRExpr::SeqW(Box::new(x), Box::new(acc)),
            b'b' => CRExpr::SeqB(Box::new(x), Box::new(acc)),
            b'&' => CRExpr::Cap(Box::new(x), Box::new(acc)),
            _ => CRExpr::Cup(Box::new(x), Box::new(acc)),
        }))
    }

    fn try_operator(&mut self) -> Result<Option<u8>> {
        match self.peek() {
            Some(b';') => {
                self.pos += 1;
                match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        Ok(Some(b'w'))
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        Ok(Some(b'b'))
                    }
                    _ => Err(self.err("`;` needs a sign")),
                }
            }
            Some(b'&') => {
                self.pos += 1;
                Ok(Some(b'&'))
            }
            Some(b'|') => {
                self.pos += 1;
                Ok(Some(b'|'))
            }
            _ => Ok(None),
        }
    }

    fn unary(&mut self) -> Result<CRExpr> {
        self.skip_ws();
        if self.peek() == Some(b'~') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(CRExpr::Neg(Box::new(inner)));
        }
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'^') {
                self.pos += 1;
                e = CRExpr::Op(Box::new(e));
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> Result<CRExpr> {
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
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected CR expression"));
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match word {
            "id" => match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    Ok(CRExpr::IdW)
                }
                Some(b'-') => {
                    self.pos += 1;
                    Ok(CRExpr::IdB)
                }
                _ => Err(self.err("`id` needs a sign")),
            },
            "top" => Ok(CRExpr::Top),
            "bot" => Ok(CRExpr::Bot),
            _ => Ok(CRExpr::Sym(word.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel::eval;

    fn interp() -> Interpretation {
        let mut r = Relation::empty(1, 1);
        r.pairs.insert((vec![0], vec![1]));
        r.pairs.insert((vec![1], vec![1]));
        let mut s = Relation::empty(1, 1);
        s.pairs.insert((vec![1], vec![0]));
        Interpretation::new(2).with("R", r).with("S", s)
    }

    #[test]
    fn top_is_all() {
        let r = cr_eval(&CRExpr::Top, &Interpretation::new(2)).unwrap();
        assert_eq!(r.pairs.len(), 4);
    }

    #[test]
    fn black_seq_is_de_morgan_dual() {
        let i = interp();
        let e = parse_cr("R ;- S").unwrap();
        let direct = cr_eval(&e, &i).unwrap();
        let via = cr_eval(&parse_cr("~(~R ;+ ~S)").unwrap(), &i).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn converse_clause() {
        let i = interp();
        let r = cr_eval(&parse_cr("R^").unwrap(), &i).unwrap();
        assert_eq!(r, i.get("R").unwrap().converse());
    }

    #[test]
    fn encode_cap_is_sandwich() {
        let t = cr_encode(&parse_cr("R & S").unwrap()).unwrap();
        let expect = crate::parse::parse("cp+ ;+ (R^o *+ S^o) ;+ cc+").unwrap();
        assert!(crate::normalize::struct_eq(&t, &expect));
    }

    #[test]
    fn encode_top() {
        let t = cr_encode(&CRExpr::Top).unwrap();
        assert!(crate::normalize::struct_eq(
            &t,
            &crate::parse::parse("dc+ ;+ cd+").unwrap()
        ));
    }

    #[test]
    fn correspondence_on_examples() {
        let i = interp();
        for s in ["R & S", "R | S", "R ;- S", "~R", "R^ ;+ S", "top & ~id+", "bot | R^^"] {
            let e = parse_cr(s).unwrap();
            let direct = cr_eval(&e, &i).unwrap();
            let encoded = eval(&cr_encode(&e).unwrap(), &i).unwrap();
            assert_eq!(direct, encoded, "{s}");
        }
    }
}
