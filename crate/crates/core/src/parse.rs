use crate::error::{Error, Result};
use crate::term::{Color, GenKind, SugarFam, Term};

/// Parse the concrete term syntax.
///
/// Tokens: generators `cp+ dc+ cc+ cd+ id+ e+ sw+` (and `-` duals), relation
/// symbols `NAME^o` / `NAME^b`, infix `;+ ;- *+ *-`, sugar `cp+@n`, `sw+@n,m`,
/// parentheses. Chains of one operator associate to the right; mixing
/// operators requires parentheses.
pub fn parse(text: &str) -> Result<Term> {
    let mut p = Parser::new(text);
    let t = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

pub(crate) struct Parser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
    /// When set, `$a`-style metavariables and symbolic sugar arities are
    /// accepted; used by the pattern parser.
    pub(crate) pattern_mode: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Piece {
    Term(Term),
    Meta(String),
    Alpha(Box<Piece>),
    SymbolicSugar(SugarFam, Color, crate::pattern::ArityExpr, Option<crate::pattern::ArityExpr>),
    Seq(Color, Box<Piece>, Box<Piece>),
    Tensor(Color, Box<Piece>, Box<Piece>),
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            pattern_mode: false,
        }
    }

    pub(crate) fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let p = self.piece_expr()?;
        piece_to_term(p).ok_or_else(|| self.err("metavariables are not allowed in plain terms"))
    }

    /// Operator-chain parser shared between terms and patterns.
    pub(crate) fn piece_expr(&mut self) -> Result<Piece> {
        let first = self.atom()?;
        self.skip_ws();
        let op = match self.peek() {
            Some(b';') | Some(b'*') => self.operator()?,
            _ => return Ok(first),
        };
        let mut parts = vec![first, self.atom_after(op)?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b';') | Some(b'*') => {
                    let save = self.pos;
                    let next = self.operator()?;
                    if next != op {
                        self.pos = save;
                        return Err(self.err(
                            "mixed operators need parentheses; chains of one operator associate right",
                        ));
                    }
                    let a = self.atom_after(op)?;
                    parts.push(a);
                }
                _ => break,
            }
        }
        // right-associate
        let mut it = parts.into_iter().rev();
        let last = it.next().unwrap();
        Ok(it.fold(last, |acc, x| match op {
            (true, c) => Piece::Seq(c, Box::new(x), Box::new(acc)),
            (false, c) => Piece::Tensor(c, Box::new(x), Box::new(acc)),
        }))
    }

    fn atom_after(&mut self, _op: (bool, Color)) -> Result<Piece> {
        self.skip_ws();
        self.atom()
    }

    /// (is_seq, color)
    fn operator(&mut self) -> Result<(bool, Color)> {
        let is_seq = match self.peek() {
            Some(b';') => true,
            Some(b'*') => false,
            _ => return Err(self.err("expected operator")),
        };
        self.pos += 1;
        let color = match self.peek() {
            Some(b'+') => Color::White,
            Some(b'-') => Color::Black,
            _ => return Err(self.err("operator needs a colour sign `+` or `-`")),
        };
        self.pos += 1;
        Ok((is_seq, color))
    }

    fn atom(&mut self) -> Result<Piece> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.piece_expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(b'$') if self.pattern_mode => {
                self.pos += 1;
                let name = self.ident()?;
                Ok(Piece::Meta(format!("${name}")))
            }
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            _ => Err(self.err("expected a term")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            return Err(self.err("expected identifier"));
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn word(&mut self) -> Result<Piece> {
        let start = self.pos;
        let name = self.ident()?;
        // alpha($a) in pattern mode
        if self.pattern_mode && name == "alpha" && self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.piece_expr()?;
            self.skip_ws();
            if !self.eat(b')') {
                return Err(self.err("expected `)` after alpha(...)"));
            }
            return Ok(Piece::Alpha(Box::new(inner)));
        }
        // relation symbol NAME^o / NAME^b
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let color = match self.peek() {
                Some(b'o') => Color::White,
                Some(b'b') => Color::Black,
                _ => return Err(self.err("expected `o` or `b` after `^`")),
            };
            self.pos += 1;
            return Ok(Piece::Term(Term::Rel(name, color)));
        }
        // generator or sugar: token then sign, optional @args
        let kind = match name.as_str() {
            "cp" => Some((GenKind::Copier, SugarFam::CopierN)),
            "dc" => Some((GenKind::Discard, SugarFam::DiscardN)),
            "cc" => Some((GenKind::Cocopier, SugarFam::CocopierN)),
            "cd" => Some((GenKind::Codiscard, SugarFam::CodiscardN)),
            "id" => Some((GenKind::Id1, SugarFam::IdN)),
            "sw" => Some((GenKind::Symm, SugarFam::SymmNM)),
            "e" => Some((GenKind::Id0, SugarFam::IdN)),
            _ => None,
        };
        let Some((gk, fam)) = kind else {
            self.pos = start;
            return Err(self.err("unknown token; relation symbols are written `NAME^o` or `NAME^b`"));
        };
        let color = match self.peek() {
            Some(b'+') => Color::White,
            Some(b'-') => Color::Black,
            _ => return Err(self.err("generator needs a colour sign `+` or `-`")),
        };
        self.pos += 1;
        if self.eat(b'@') {
            if name == "e" {
                return Err(self.err("`e` takes no arity argument"));
            }
            let n = self.arity_expr()?;
            let m = if fam == SugarFam::SymmNM {
                self.skip_ws();
                if !self.eat(b',') {
                    return Err(self.err("`sw@` needs two arities `n,m`"));
                }
                Some(self.arity_expr()?)
            } else {
                None
            };
            match (n.as_const(), m.as_ref().map(|e| e.as_const())) {
                (Some(n), Some(Some(m))) => {
                    return Ok(Piece::Term(Term::sugar(fam, color, n, Some(m))))
                }
                (Some(n), None) => return Ok(Piece::Term(Term::sugar(fam, color, n, None))),
                _ if self.pattern_mode => return Ok(Piece::SymbolicSugar(fam, color, n, m)),
                _ => return Err(self.err("symbolic arities are only allowed in patterns")),
            }
        }
        Ok(Piece::Term(Term::Gen(gk, color)))
    }

    fn arity_expr(&mut self) -> Result<crate::pattern::ArityExpr> {
        use crate::pattern::ArityExpr;
        self.skip_ws();
        let mut acc = ArityExpr::zero();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .parse()
                        .map_err(|_| self.err("arity out of range"))?;
                    acc = acc.plus_const(k);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    if !self.pattern_mode {
                        return Err(self.err("symbolic arity in a plain term"));
                    }
                    let v = self.ident()?;
                    acc = acc.plus_var(&v);
                }
                _ => return Err(self.err("expected arity")),
            }
            self.skip_ws();
            if !self.eat(b'+') {
                break;
            }
        }
        Ok(acc)
    }
}

pub(crate) fn piece_to_term(p: Piece) -> Option<Term> {
    match p {
        Piece::Term(t) => Some(t),
        Piece::Seq(c, l, r) => Some(Term::seq(c, piece_to_term(*l)?, piece_to_term(*r)?)),
        Piece::Tensor(c, l, r) => Some(Term::tensor(c, piece_to_term(*l)?, piece_to_term(*r)?)),
        Piece::Meta(_) | Piece::Alpha(_) | Piece::SymbolicSugar(..) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::render;

    #[test]
    fn round_trip_goldens() {
        for s in [
            "cp+",
            "R^o",
            "R^b ;- S^o",
            "(cp+ ;+ (R^o *+ S^o)) ;+ cc+",
            "cp+@3",
            "sw+@2,1",
            "cd+ ;+ ((id- *- cd-) ;- R^o)",
            "e+ *+ e-",
        ] {
            let t = parse(s).unwrap();
            assert_eq!(render(&t), s, "render(parse({s:?}))");
            assert_eq!(parse(&render(&t)).unwrap(), t);
        }
    }

    #[test]
    fn chains_associate_right() {
        let t = parse("cp+ ;+ (R^o *+ S^o) ;+ cc+").unwrap();
        let u = parse("cp+ ;+ ((R^o *+ S^o) ;+ cc+)").unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn malformed() {
        assert!(parse("cp+ ;;").is_err());
        assert!(parse("cp").is_err());
        assert!(parse("cp+ ;+ R^o *+ S^o").is_err(), "mixed operators need parens");
        assert!(parse("$a").is_err(), "metavariables only in patterns");
    }
}
