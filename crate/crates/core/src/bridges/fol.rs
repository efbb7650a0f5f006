//! Typed first-order logic over a context of variables, its encoding into
//! diagrams, the Tarskian evaluator used as the independent oracle, and the
//! reverse decoder from diagrams to formulas in a split context.

use crate::error::{Error, Result};
use crate::rel::{Interpretation, Relation, Tuple};
use crate::signature::Signature;
use crate::term::{Color, GenKind, SugarFam, Term};
use std::fmt;

/// Terms: variables are 1-based positions in the ambient context; function
/// symbols live in the same monoidal signature with coarity 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FolTerm {
    Var(u32),
    App(String, Vec<FolTerm>),
}

/// Formulas in a context of `n` variables; quantifiers bind the last variable
/// of the extended ambient context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Rel(String, Vec<FolTerm>),
    Eq(FolTerm, FolTerm),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Top,
    Bot,
    Exists(Box<Formula>),
    Forall(Box<Formula>),
}

pub fn scope_check_term(t: &FolTerm, n: u32, sig: &Signature) -> Result<()> {
    match t {
        FolTerm::Var(i) => {
            if *i == 0 || *i > n {
                Err(Error::Scope(format!("variable x{i} out of context {n}")))
            } else {
                Ok(())
            }
        }
        FolTerm::App(f, args) => {
            let st = sig.get(f)?;
            if st.coar != 1 {
                return Err(Error::Scope(format!("`{f}` is not a function symbol")));
            }
            if st.ar as usize != args.len() {
                return Err(Error::Scope(format!(
                    "`{f}` expects {} arguments, got {}",
                    st.ar,
                    args.len()
                )));
            }
            args.iter().try_for_each(|a| scope_check_term(a, n, sig))
        }
    }
}

pub fn scope_check(phi: &Formula, n: u32, sig: &Signature) -> Result<()> {
    match phi {
        Formula::Rel(r, args) => {
            let st = sig.get(r)?;
            if st.coar != 0 {
                return Err(Error::Scope(format!("`{r}` is not a predicate symbol")));
            }
            if st.ar as usize != args.len() {
                return Err(Error::Scope(format!(
                    "`{r}` expects {} arguments, got {}",
                    st.ar,
                    args.len()
                )));
            }
            args.iter().try_for_each(|a| scope_check_term(a, n, sig))
        }
        Formula::Eq(a, b) => {
            scope_check_term(a, n, sig)?;
            scope_check_term(b, n, sig)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            scope_check(a, n, sig)?;
            scope_check(b, n, sig)
        }
        Formula::Not(a) => scope_check(a, n, sig),
        Formula::Top | Formula::Bot => Ok(()),
        Formula::Exists(a) | Formula::Forall(a) => scope_check(a, n + 1, sig),
    }
}

/// `k`-fold white copier `n -> k*n`: the fan-out block used for argument
/// tuples and conjunction.
fn copier_k(n: u32, k: u32, c: Color) -> Term {
    match k {
        0 => Term::sugar(SugarFam::DiscardN, c, n, None),
        1 => Term::sugar(SugarFam::IdN, c, n, None),
        _ => Term::seq(
            c,
            Term::sugar(SugarFam::CopierN, c, n, None),
            Term::tensor(c, Term::sugar(SugarFam::IdN, c, n, None), copier_k(n, k - 1, c)),
        ),
    }
}

/// Encode a term of context `n` as a diagram `n -> 1`.
pub fn fol_encode_term(t: &FolTerm, n: u32, sig: &Signature) -> Result<Term> {
    scope_check_term(t, n, sig)?;
    Ok(encode_term(t, n))
}

fn encode_term(t: &FolTerm, n: u32) -> Term {
    let w = Color::White;
    match t {
        FolTerm::Var(i) => {
            // projection: discard everything but position i
            let pre = Term::sugar(SugarFam::DiscardN, w, i - 1, None);
            let post = Term::sugar(SugarFam::DiscardN, w, n - i, None);
            Term::tensor(
                w,
                pre,
                Term::tensor(w, Term::Gen(GenKind::Id1, w), post),
            )
        }
        FolTerm::App(f, args) => {
            let k = args.len() as u32;
            let fan = copier_k(n, k, w);
            let body = if args.is_empty() {
                Term::rel(f, w)
            } else {
                let tup = args
                    .iter()
                    .rev()
                    .map(|a| encode_term(a, n))
                    .reduce(|acc, x| Term::tensor(w, x, acc))
                    .unwrap();
                Term::seq(w, tup, Term::rel(f, w))
            };
            Term::seq(w, fan, body)
        }
    }
}

/// Encode a formula of context `n` as a diagram `n -> 0`, clause by clause:
/// conjunction and disjunction by (co)pier sandwiches, quantifiers by
/// plugging a codischarger onto the last wire (white for exists, black with
/// black identities for forall), negation by the derived complement.
pub fn fol_encode(phi: &Formula, n: u32, sig: &Signature) -> Result<Term> {
    scope_check(phi, n, sig)?;
    encode(phi, n, sig)
}

fn encode(phi: &Formula, n: u32, sig: &Signature) -> Result<Term> {
    let w = Color::White;
    let b = Color::Black;
    Ok(match phi {
        Formula::Top => Term::sugar(SugarFam::DiscardN, w, n, None),
        Formula::Bot => Term::sugar(SugarFam::DiscardN, b, n, None),
        Formula::Rel(r, args) => {
            let k = args.len() as u32;
            let fan = copier_k(n, k, w);
            let body = if args.is_empty() {
                Term::rel(r, w)
            } else {
                let tup = args
                    .iter()
                    .rev()
                    .map(|a| encode_term(a, n))
                    .reduce(|acc, x| Term::tensor(w, x, acc))
                    .unwrap();
                Term::seq(w, tup, Term::rel(r, w))
            };
            Term::seq(w, fan, body)
        }
        Formula::Eq(a, b2) => {
            let fan = copier_k(n, 2, w);
            let pair = Term::tensor(w, encode_term(a, n), encode_term(b2, n));
            let merge = Term::seq(
                w,
                Term::Gen(GenKind::Cocopier, w),
                Term::Gen(GenKind::Discard, w),
            );
            Term::seq(w, fan, Term::seq(w, pair, merge))
        }
        Formula::And(p, q) => Term::seq(
            w,
            Term::sugar(SugarFam::CopierN, w, n, None),
            Term::tensor(w, encode(p, n, sig)?, encode(q, n, sig)?),
        ),
        Formula::Or(p, q) => Term::seq(
            b,
            Term::sugar(SugarFam::CopierN, b, n, None),
            Term::tensor(b, encode(p, n, sig)?, encode(q, n, sig)?),
        ),
        Formula::Not(p) => crate::derived::negate(&encode(p, n, sig)?, sig)?,
        Formula::Exists(p) => Term::seq(
            w,
            Term::tensor(
                w,
                Term::sugar(SugarFam::IdN, w, n, None),
                Term::Gen(GenKind::Codiscard, w),
            ),
            encode(p, n + 1, sig)?,
        ),
        Formula::Forall(p) => Term::seq(
            b,
            Term::tensor(
                b,
                Term::sugar(SugarFam::IdN, b, n, None),
                Term::Gen(GenKind::Codiscard, b),
            ),
            encode(p, n + 1, sig)?,
        ),
    })
}

/// Total function tables for the function symbols, precomputed for the
/// Tarskian evaluator.
fn function_table(interp: &Interpretation, f: &str) -> Result<Relation> {
    let r = interp.get(f)?;
    if !r.is_map(interp.domain_size) {
        return Err(Error::NonFunctionalSymbol(f.to_string()));
    }
    Ok(r.clone())
}

pub fn eval_term(t: &FolTerm, interp: &Interpretation, env: &[u8]) -> Result<u8> {
    match t {
        FolTerm::Var(i) => Ok(env[*i as usize - 1]),
        FolTerm::App(f, args) => {
            let table = function_table(interp, f)?;
            let vals: Tuple = args
                .iter()
                .map(|a| eval_term(a, interp, env))
                .collect::<Result<_>>()?;
            for (x, y) in &table.pairs {
                if *x == vals {
                    return Ok(y[0]);
                }
            }
            unreachable!("total table has an image for every input")
        }
    }
}

/// Standard Tarskian satisfaction over the finite domain; quantifiers range
/// over the domain (vacuously true forall / false exists when it is empty).
pub fn fol_eval(phi: &Formula, interp: &Interpretation, env: &[u8]) -> Result<bool> {
    Ok(match phi {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Rel(r, args) => {
            let table = interp.get(r)?;
            let vals: Tuple = args
                .iter()
                .map(|a| eval_term(a, interp, env))
                .collect::<Result<_>>()?;
            table.contains(&vals, &vec![])
        }
        Formula::Eq(a, b) => eval_term(a, interp, env)? == eval_term(b, interp, env)?,
        Formula::And(p, q) => fol_eval(p, interp, env)? && fol_eval(q, interp, env)?,
        Formula::Or(p, q) => fol_eval(p, interp, env)? || fol_eval(q, interp, env)?,
        Formula::Not(p) => !fol_eval(p, interp, env)?,
        Formula::Exists(p) => {
            let mut any = false;
            for v in 0..interp.domain_size {
                let mut env2 = env.to_vec();
                env2.push(v);
                if fol_eval(p, interp, &env2)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::Forall(p) => {
            let mut all = true;
            for v in 0..interp.domain_size {
                let mut env2 = env.to_vec();
                env2.push(v);
                if !fol_eval(p, interp, &env2)? {
                    all = false;
                    break;
                }
            }
            all
        }
    })
}

/// A decoded diagram: a formula over the split context `inputs;outputs`,
/// scoped in `inputs + outputs` free variables (inputs first).
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub inputs: u32,
    pub outputs: u32,
    pub formula: Formula,
}

/// Remap a formula from ambient context `k_old` into `k_new`: free variables
/// (≤ k_old) through `f`, bound levels shifted to start after `k_new`.
fn remap(phi: &Formula, k_old: u32, k_new: u32, f: &dyn Fn(u32) -> u32) -> Formula {
    let var = |i: u32| if i <= k_old { f(i) } else { k_new + (i - k_old) };
    fn remap_term(t: &FolTerm, var: &dyn Fn(u32) -> u32) -> FolTerm {
        match t {
            FolTerm::Var(i) => FolTerm::Var(var(*i)),
            FolTerm::App(g, args) => {
                FolTerm::App(g.clone(), args.iter().map(|a| remap_term(a, var)).collect())
            }
        }
    }
    match phi {
        Formula::Rel(r, args) => {
            Formula::Rel(r.clone(), args.iter().map(|a| remap_term(a, &var)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(remap_term(a, &var), remap_term(b, &var)),
        Formula::And(p, q) => Formula::And(
            Box::new(remap(p, k_old, k_new, f)),
            Box::new(remap(q, k_old, k_new, f)),
        ),
        Formula::Or(p, q) => Formula::Or(
            Box::new(remap(p, k_old, k_new, f)),
            Box::new(remap(q, k_old, k_new, f)),
        ),
        Formula::Not(p) => Formula::Not(Box::new(remap(p, k_old, k_new, f))),
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Exists(p) => Formula::Exists(Box::new(remap(p, k_old, k_new, f))),
        Formula::Forall(p) => Formula::Forall(Box::new(remap(p, k_old, k_new, f))),
    }
}

fn conj(parts: Vec<Formula>) -> Formula {
    parts
        .into_iter()
        .reduce(|a, b| Formula::And(Box::new(a), Box::new(b)))
        .unwrap_or(Formula::Top)
}

fn disj(parts: Vec<Formula>) -> Formula {
    parts
        .into_iter()
        .reduce(|a, b| Formula::Or(Box::new(a), Box::new(b)))
        .unwrap_or(Formula::Bot)
}

/// The reverse encoding: every generator becomes the (in)equation of its
/// wires, white composition introduces existentially bound middle variables,
/// black composition universal ones, tensors concatenate contexts. Bound
/// blocks are numbered after the free context, left to right.
pub fn fol_decode(t: &Term, sig: &Signature) -> Result<Decoded> {
    let t = t.desugar();
    crate::ty::typecheck(&t, sig)?;
    Ok(decode(&t, sig))
}

fn decode(t: &Term, sig: &Signature) -> Decoded {
    match t {
        Term::Gen(k, c) => {
            let (n, m) = k.arity();
            let x = |i: u32| FolTerm::Var(i);
            let y = |j: u32| FolTerm::Var(n + j);
            let formula = match (k, c) {
                (GenKind::Id0, Color::White) => Formula::Top,
                (GenKind::Id0, Color::Black) => Formula::Bot,
                (GenKind::Id1, Color::White) => Formula::Eq(x(1), y(1)),
                (GenKind::Id1, Color::Black) => Formula::Not(Box::new(Formula::Eq(x(1), y(1)))),
                (GenKind::Symm, Color::White) => conj(vec![
                    Formula::Eq(x(1), y(2)),
                    Formula::Eq(x(2), y(1)),
                ]),
                (GenKind::Symm, Color::Black) => disj(vec![
                    Formula::Not(Box::new(Formula::Eq(x(1), y(2)))),
                    Formula::Not(Box::new(Formula::Eq(x(2), y(1)))),
                ]),
                (GenKind::Copier, Color::White) => conj(vec![
                    Formula::Eq(x(1), y(1)),
                    Formula::Eq(x(1), y(2)),
                ]),
                (GenKind::Copier, Color::Black) => disj(vec![
                    Formula::Not(Box::new(Formula::Eq(x(1), y(1)))),
                    Formula::Not(Box::new(Formula::Eq(x(1), y(2)))),
                ]),
                (GenKind::Cocopier, Color::White) => conj(vec![
                    Formula::Eq(x(1), y(1)),
                    Formula::Eq(x(2), y(1)),
                ]),
                (GenKind::Cocopier, Color::Black) => disj(vec![
                    Formula::Not(Box::new(Formula::Eq(x(1), y(1)))),
                    Formula::Not(Box::new(Formula::Eq(x(2), y(1)))),
                ]),
                (GenKind::Discard, Color::White) | (GenKind::Codiscard, Color::White) => {
                    Formula::Top
                }
                (GenKind::Discard, Color::Black) | (GenKind::Codiscard, Color::Black) => {
                    Formula::Bot
                }
            };
            Decoded {
                inputs: n,
                outputs: m,
                formula,
            }
        }
        Term::Rel(name, c) => {
            let st = sig.get(name).expect("typechecked");
            match c {
                Color::White => {
                    let args = (1..=st.ar + st.coar).map(FolTerm::Var).collect();
                    Decoded {
                        inputs: st.ar,
                        outputs: st.coar,
                        formula: Formula::Rel(name.clone(), args),
                    }
                }
                Color::Black => {
                    // inputs are the coarity side; R's arguments are the
                    // outputs (arity side) followed by the inputs
                    let n = st.coar;
                    let m = st.ar;
                    let args = (1..=m)
                        .map(|j| FolTerm::Var(n + j))
                        .chain((1..=n).map(FolTerm::Var))
                        .collect();
                    Decoded {
                        inputs: n,
                        outputs: m,
                        formula: Formula::Not(Box::new(Formula::Rel(name.clone(), args))),
                    }
                }
            }
        }
        Term::Seq(color, l, r) => {
            let dl = decode(l, sig);
            let dr = decode(r, sig);
            let n = dl.inputs;
            let k = dl.outputs;
            let m = dr.outputs;
            // target context: x_1..x_n, y_1..y_m free, z_1..z_k bound after
            let phi = remap(&dl.formula, n + k, n + m, &|i| {
                if i <= n {
                    i
                } else {
                    n + m + (i - n)
                }
            });
            let psi = remap(&dr.formula, k + m, n + m, &|i| {
                if i <= k {
                    n + m + i
                } else {
                    n + (i - k)
                }
            });
            let mut body = match color {
                Color::White => Formula::And(Box::new(phi), Box::new(psi)),
                Color::Black => Formula::Or(Box::new(phi), Box::new(psi)),
            };
            for _ in 0..k {
                body = match color {
                    Color::White => Formula::Exists(Box::new(body)),
                    Color::Black => Formula::Forall(Box::new(body)),
                };
            }
            Decoded {
                inputs: n,
                outputs: m,
                formula: body,
            }
        }
        Term::Tensor(color, l, r) => {
            let dl = decode(l, sig);
            let dr = decode(r, sig);
            let (n1, m1) = (dl.inputs, dl.outputs);
            let (n2, m2) = (dr.inputs, dr.outputs);
            let phi = remap(&dl.formula, n1 + m1, n1 + n2 + m1 + m2, &|i| {
                if i <= n1 {
                    i
                } else {
                    n1 + n2 + (i - n1)
                }
            });
            let psi = remap(&dr.formula, n2 + m2, n1 + n2 + m1 + m2, &|i| {
                if i <= n2 {
                    n1 + i
                } else {
                    n1 + n2 + m1 + (i - n2)
                }
            });
            let formula = match color {
                Color::White => Formula::And(Box::new(phi), Box::new(psi)),
                Color::Black => Formula::Or(Box::new(phi), Box::new(psi)),
            };
            Decoded {
                inputs: n1 + n2,
                outputs: m1 + m2,
                formula,
            }
        }
        Term::Sugar(..) => unreachable!("desugared above"),
    }
}

impl fmt::Display for FolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolTerm::Var(i) => write!(f, "x{i}"),
            FolTerm::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::And(a, b) => write!(f, "({a} /\\ {b})"),
            Formula::Or(a, b) => write!(f, "({a} \\/ {b})"),
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::Top => write!(f, "top"),
            Formula::Bot => write!(f, "bot"),
            Formula::Exists(a) => write!(f, "exists! {a}"),
            Formula::Forall(a) => write!(f, "forall! {a}"),
        }
    }
}

/// Parse `ctx n |- phi` or a bare formula (context 0).
pub fn parse_fol(text: &str) -> Result<(u32, Formula)> {
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("ctx") {
        let Some((n_part, phi_part)) = rest.split_once("|-") else {
            return Err(Error::Syntax {
                pos: 0,
                msg: "expected `ctx n |- phi`".into(),
            });
        };
        let n: u32 = n_part.trim().parse().map_err(|_| Error::Syntax {
            pos: 0,
            msg: "bad context size".into(),
        })?;
        let phi = FolParser::parse_all(phi_part)?;
        Ok((n, phi))
    } else {
        Ok((0, FolParser::parse_all(text)?))
    }
}

struct FolParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> FolParser<'a> {
    fn parse_all(text: &str) -> Result<Formula> {
        let mut p = FolParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let phi = p.or_expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(phi)
    }

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

    fn lit(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn or_expr(&mut self) -> Result<Formula> {
        let mut acc = self.and_expr()?;
        loop {
            self.skip_ws();
            if self.lit("\\/") {
                let rhs = self.and_expr()?;
                acc = Formula::Or(Box::new(acc), Box::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn and_expr(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.lit("/\\") {
                let rhs = self.unary()?;
                acc = Formula::And(Box::new(acc), Box::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.lit("exists!") {
            return Ok(Formula::Exists(Box::new(self.unary()?)));
        }
        if self.lit("forall!") {
            return Ok(Formula::Forall(Box::new(self.unary()?)));
        }
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let phi = self.or_expr()?;
            self.skip_ws();
            if self.peek() != Some(b')') {
                return Err(self.err("expected `)`"));
            }
            self.pos += 1;
            return Ok(phi);
        }
        // keyword, predicate application, or term = term
        let save = self.pos;
        if self.lit("top") && !self.ident_continues() {
            return Ok(Formula::Top);
        }
        self.pos = save;
        if self.lit("bot") && !self.ident_continues() {
            return Ok(Formula::Bot);
        }
        self.pos = save;
        let t = self.term()?;
        self.skip_ws();
        if self.peek() == Some(b'=') {
            self.pos += 1;
            let t2 = self.term()?;
            return Ok(Formula::Eq(t, t2));
        }
        // a bare application must be a predicate
        match t {
            FolTerm::App(name, args) => Ok(Formula::Rel(name, args)),
            FolTerm::Var(_) => Err(self.err("a variable is not a formula")),
        }
    }

    fn ident_continues(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_')
    }

    fn term(&mut self) -> Result<FolTerm> {
        self.skip_ws();
        let start = self.pos;
        while self.ident_continues() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a term"));
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if let Some(num) = word.strip_prefix('x') {
            if let Ok(i) = num.parse::<u32>() {
                return Ok(FolTerm::Var(i));
            }
        }
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut args = Vec::new();
            self.skip_ws();
            if self.peek() == Some(b')') {
                self.pos += 1;
                return Ok(FolTerm::App(word.to_string(), args));
            }
            loop {
                args.push(self.term()?);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        return Ok(FolTerm::App(word.to_string(), args));
                    }
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
        }
        // bare name: a constant application
        Ok(FolTerm::App(word.to_string(), vec![]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel::eval;

    fn sig() -> Signature {
        Signature::new().with("R", 2, 0).with("P", 1, 0)
    }

    #[test]
    fn ground_truth_constants() {
        let sig = Signature::new();
        let t = fol_encode(&Formula::Top, 0, &sig).unwrap();
        assert!(crate::normalize::struct_eq(
            &t,
            &Term::Gen(GenKind::Id0, Color::White)
        ));
        let b = fol_encode(&Formula::Bot, 0, &sig).unwrap();
        assert!(crate::normalize::struct_eq(
            &b,
            &Term::Gen(GenKind::Id0, Color::Black)
        ));
        // with free variables they become dischargers
        let t1 = fol_encode(&Formula::Top, 2, &sig).unwrap();
        assert!(crate::normalize::struct_eq(
            &t1,
            &Term::sugar(SugarFam::DiscardN, Color::White, 2, None)
        ));
    }

    #[test]
    fn flagship_formula_encodes_to_flagship_diagram() {
        // exists x1. forall x2. R(x1, x2)
        let phi = Formula::Exists(Box::new(Formula::Forall(Box::new(Formula::Rel(
            "R".into(),
            vec![FolTerm::Var(1), FolTerm::Var(2)],
        )))));
        let t = fol_encode(&phi, 0, &sig()).unwrap();
        // semantically equal to the flagship diagram on every small model
        let flag = crate::parse::parse("cd+ ;+ ((id- *- cd-) ;- R^o)").unwrap();
        let mut count = 0;
        crate::oracle::for_each_interpretation(&sig(), 2, 100_000, 0, |interp| {
            let a = eval(&t, interp)?;
            let b = eval(&flag, interp)?;
            assert_eq!(a, b);
            count += 1;
            Ok(false)
        })
        .unwrap();
        assert!(count > 0);
    }

    #[test]
    fn tarskian_basics() {
        let i = Interpretation::new(0);
        assert!(fol_eval(&Formula::Top, &i, &[]).unwrap());
        assert!(!fol_eval(&Formula::Exists(Box::new(Formula::Top)), &i, &[]).unwrap());
        assert!(fol_eval(&Formula::Forall(Box::new(Formula::Bot)), &i, &[]).unwrap());
        let i1 = Interpretation::new(1);
        assert!(fol_eval(
            &Formula::Eq(FolTerm::Var(1), FolTerm::Var(1)),
            &i1,
            &[0]
        )
        .unwrap());
    }

    #[test]
    fn decode_copier() {
        let sig = Signature::new();
        let d = fol_decode(&crate::parse::parse("cp+").unwrap(), &sig).unwrap();
        assert_eq!((d.inputs, d.outputs), (1, 2));
        // x1 = y1 /\ x1 = y2, with y1 = var 2, y2 = var 3
        let expect = Formula::And(
            Box::new(Formula::Eq(FolTerm::Var(1), FolTerm::Var(2))),
            Box::new(Formula::Eq(FolTerm::Var(1), FolTerm::Var(3))),
        );
        assert_eq!(d.formula, expect);
    }

    #[test]
    fn decode_black_unit_is_bot() {
        let d = fol_decode(&crate::parse::parse("e-").unwrap(), &Signature::new()).unwrap();
        assert_eq!((d.inputs, d.outputs), (0, 0));
        assert_eq!(d.formula, Formula::Bot);
    }

    #[test]
    fn parse_fol_syntax() {
        let (n, phi) = parse_fol("ctx 2 |- R(x1, x2) /\\ !P(x1)").unwrap();
        assert_eq!(n, 2);
        scope_check(&phi, n, &sig()).unwrap();
        let (_, phi2) = parse_fol("exists! forall! R(x1, x2)").unwrap();
        assert!(matches!(phi2, Formula::Exists(_)));
    }
}
