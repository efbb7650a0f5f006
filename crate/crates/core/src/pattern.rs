use crate::derived::alpha;
use crate::error::{Error, Result};
use crate::parse::{Parser, Piece};
use crate::signature::Signature;
use crate::term::{Color, GenKind, SugarFam, Term};
use std::collections::BTreeMap;
use std::fmt;

/// A linear arity expression: constant plus variables with multiplicity,
/// e.g. `n+n`, `n+m`, `2`, `0`. Canonical form makes symbolic type checking
/// a map comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityExpr {
    pub konst: u32,
    pub vars: BTreeMap<String, u32>,
}

impl ArityExpr {
    pub fn zero() -> Self {
        ArityExpr {
            konst: 0,
            vars: BTreeMap::new(),
        }
    }

    pub fn konst(k: u32) -> Self {
        ArityExpr {
            konst: k,
            vars: BTreeMap::new(),
        }
    }

    pub fn var(v: &str) -> Self {
        let mut vars = BTreeMap::new();
        vars.insert(v.to_string(), 1);
        ArityExpr { konst: 0, vars }
    }

    pub fn plus_const(mut self, k: u32) -> Self {
        self.konst += k;
        self
    }

    pub fn plus_var(mut self, v: &str) -> Self {
        *self.vars.entry(v.to_string()).or_insert(0) += 1;
        self
    }

    pub fn add(&self, other: &ArityExpr) -> ArityExpr {
        let mut out = self.clone();
        out.konst += other.konst;
        for (v, k) in &other.vars {
            *out.vars.entry(v.clone()).or_insert(0) += k;
        }
        out
    }

    pub fn as_const(&self) -> Option<u32> {
        if self.vars.is_empty() {
            Some(self.konst)
        } else {
            None
        }
    }

    /// A bare variable, if this expression is exactly one.
    pub fn as_var(&self) -> Option<&str> {
        if self.konst == 0 && self.vars.len() == 1 {
            let (v, k) = self.vars.iter().next().unwrap();
            if *k == 1 {
                return Some(v);
            }
        }
        None
    }

    pub fn eval(&self, env: &BTreeMap<String, u32>) -> Result<u32> {
        let mut total = self.konst;
        for (v, k) in &self.vars {
            let val = env
                .get(v)
                .ok_or_else(|| Error::UnboundMeta(v.clone()))?;
            total += val * k;
        }
        Ok(total)
    }
}

impl fmt::Display for ArityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, k) in &self.vars {
            for _ in 0..*k {
                if !first {
                    write!(f, "+")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
        }
        if self.konst > 0 || first {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{}", self.konst)?;
        }
        Ok(())
    }
}

/// Pattern terms: diagram terms with term metavariables `$a`, relation-symbol
/// placeholders, symbolic sugar arities, and an `alpha(...)` operator that is
/// computed at instantiation time.
#[derive(Debug, Clone, PartialEq)]
pub enum Pat {
    Gen(GenKind, Color),
    /// A relation-symbol placeholder; the step substitution assigns the name.
    RelVar(String, Color),
    Meta(String),
    Alpha(Box<Pat>),
    Seq(Color, Box<Pat>, Box<Pat>),
    Tensor(Color, Box<Pat>, Box<Pat>),
    Sugar(SugarFam, Color, ArityExpr, Option<ArityExpr>),
}

impl Pat {
    pub fn parse(text: &str) -> Result<Pat> {
        let mut p = Parser::new(text);
        p.pattern_mode = true;
        let piece = p.piece_expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::Syntax {
                pos: p.pos,
                msg: "trailing input".into(),
            });
        }
        Ok(piece_to_pat(piece))
    }

    /// The photographic negative: flip every colour, keep structure. Used to
    /// generate black-fragment rule rows from white ones. Relation-symbol
    /// placeholders are not allowed (their negative is not a symbol).
    pub fn color_dual(&self) -> Result<Pat> {
        Ok(match self {
            Pat::Gen(k, c) => Pat::Gen(*k, c.flip()),
            Pat::RelVar(name, _) => {
                return Err(Error::Manifest {
                    rule: name.clone(),
                    msg: "rows with relation symbols have no mechanical colour dual".into(),
                })
            }
            Pat::Meta(v) => Pat::Meta(v.clone()),
            Pat::Alpha(p) => Pat::Alpha(Box::new(p.color_dual()?)),
            Pat::Seq(c, l, r) => Pat::Seq(c.flip(), Box::new(l.color_dual()?), Box::new(r.color_dual()?)),
            Pat::Tensor(c, l, r) => {
                Pat::Tensor(c.flip(), Box::new(l.color_dual()?), Box::new(r.color_dual()?))
            }
            Pat::Sugar(f, c, n, m) => Pat::Sugar(*f, c.flip(), n.clone(), m.clone()),
        })
    }

    pub fn metavars(&self, out: &mut Vec<String>) {
        match self {
            Pat::Meta(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Pat::Alpha(p) => p.metavars(out),
            Pat::Seq(_, l, r) | Pat::Tensor(_, l, r) => {
                l.metavars(out);
                r.metavars(out);
            }
            _ => {}
        }
    }

    pub fn relvars(&self, out: &mut Vec<String>) {
        match self {
            Pat::RelVar(v, _) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Pat::Alpha(p) => p.relvars(out),
            Pat::Seq(_, l, r) | Pat::Tensor(_, l, r) => {
                l.relvars(out);
                r.relvars(out);
            }
            _ => {}
        }
    }
}

fn piece_to_pat(p: Piece) -> Pat {
    match p {
        Piece::Term(t) => term_to_pat(&t),
        Piece::Meta(v) => Pat::Meta(v),
        Piece::Alpha(inner) => Pat::Alpha(Box::new(piece_to_pat(*inner))),
        Piece::SymbolicSugar(f, c, n, m) => Pat::Sugar(f, c, n, m),
        Piece::Seq(c, l, r) => Pat::Seq(c, Box::new(piece_to_pat(*l)), Box::new(piece_to_pat(*r))),
        Piece::Tensor(c, l, r) => {
            Pat::Tensor(c, Box::new(piece_to_pat(*l)), Box::new(piece_to_pat(*r)))
        }
    }
}

/// Concrete terms lift to patterns; relation symbols become placeholders.
fn term_to_pat(t: &Term) -> Pat {
    match t {
        Term::Gen(k, c) => Pat::Gen(*k, *c),
        Term::Rel(name, c) => Pat::RelVar(name.clone(), *c),
        Term::Seq(c, l, r) => Pat::Seq(*c, Box::new(term_to_pat(l)), Box::new(term_to_pat(r))),
        Term::Tensor(c, l, r) => {
            Pat::Tensor(*c, Box::new(term_to_pat(l)), Box::new(term_to_pat(r)))
        }
        Term::Sugar(f, c, n, m) => Pat::Sugar(
            *f,
            *c,
            ArityExpr::konst(*n),
            m.map(ArityExpr::konst),
        ),
    }
}

/// Symbolic interface type of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatType {
    pub dom: ArityExpr,
    pub cod: ArityExpr,
}

/// Type schemes for metavariables and relation-symbol placeholders.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchemaVars {
    /// `$a` -> (dom, cod) over arity variables
    pub metas: BTreeMap<String, PatType>,
    /// `R` -> (ar, coar)
    pub rels: BTreeMap<String, PatType>,
}

/// Symbolic typing of patterns; fails if composition interfaces cannot be
/// proved equal as linear expressions.
pub fn pat_typecheck(p: &Pat, vars: &SchemaVars) -> Result<PatType> {
    match p {
        Pat::Gen(k, _) => {
            let (d, c) = k.arity();
            Ok(PatType {
                dom: ArityExpr::konst(d),
                cod: ArityExpr::konst(c),
            })
        }
        Pat::RelVar(name, color) => {
            let st = vars.rels.get(name).ok_or_else(|| Error::Manifest {
                rule: name.clone(),
                msg: format!("relation placeholder `{name}` has no meta entry"),
            })?;
            Ok(match color {
                Color::White => st.clone(),
                Color::Black => PatType {
                    dom: st.cod.clone(),
                    cod: st.dom.clone(),
                },
            })
        }
        Pat::Meta(v) => vars.metas.get(v).cloned().ok_or_else(|| Error::Manifest {
            rule: v.clone(),
            msg: format!("metavariable `{v}` has no meta entry"),
        }),
        Pat::Alpha(inner) => {
            // alpha is type-reversing
            let t = pat_typecheck(inner, vars)?;
            Ok(PatType {
                dom: t.cod,
                cod: t.dom,
            })
        }
        Pat::Seq(_, l, r) => {
            let lt = pat_typecheck(l, vars)?;
            let rt = pat_typecheck(r, vars)?;
            if lt.cod != rt.dom {
                return Err(Error::Manifest {
                    rule: String::new(),
                    msg: format!("symbolic interface disagreement: {} vs {}", lt.cod, rt.dom),
                });
            }
            Ok(PatType {
                dom: lt.dom,
                cod: rt.cod,
            })
        }
        Pat::Tensor(_, l, r) => {
            let lt = pat_typecheck(l, vars)?;
            let rt = pat_typecheck(r, vars)?;
            Ok(PatType {
                dom: lt.dom.add(&rt.dom),
                cod: lt.cod.add(&rt.cod),
            })
        }
        Pat::Sugar(f, _, n, m) => Ok(match f {
            SugarFam::CopierN => PatType {
                dom: n.clone(),
                cod: n.add(n),
            },
            SugarFam::DiscardN => PatType {
                dom: n.clone(),
                cod: ArityExpr::zero(),
            },
            SugarFam::CocopierN => PatType {
                dom: n.add(n),
                cod: n.clone(),
            },
            SugarFam::CodiscardN => PatType {
                dom: ArityExpr::zero(),
                cod: n.clone(),
            },
            SugarFam::IdN => PatType {
                dom: n.clone(),
                cod: n.clone(),
            },
            SugarFam::SymmNM => {
                let m = m.clone().unwrap_or_else(ArityExpr::zero);
                PatType {
                    dom: n.add(&m),
                    cod: m.add(n),
                }
            }
        }),
    }
}

/// A full assignment for instantiating a pattern.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    pub terms: BTreeMap<String, Term>,
    pub rels: BTreeMap<String, String>,
    pub arities: BTreeMap<String, u32>,
}

/// Instantiate a pattern. Sugar with symbolic arities is expanded after
/// evaluation; `alpha(...)` is computed on the instantiated subterm (which is
/// desugared first, as alpha is defined on sugar-free terms).
pub fn instantiate(p: &Pat, asg: &Assignment) -> Result<Term> {
    match p {
        Pat::Gen(k, c) => Ok(Term::Gen(*k, *c)),
        Pat::RelVar(v, c) => {
            let name = asg
                .rels
                .get(v)
                .ok_or_else(|| Error::UnboundMeta(v.clone()))?;
            Ok(Term::Rel(name.clone(), *c))
        }
        Pat::Meta(v) => asg
            .terms
            .get(v)
            .cloned()
            .ok_or_else(|| Error::UnboundMeta(v.clone())),
        Pat::Alpha(inner) => {
            let t = instantiate(inner, asg)?;
            Ok(alpha(&t.desugar()))
        }
        Pat::Seq(c, l, r) => Ok(Term::seq(*c, instantiate(l, asg)?, instantiate(r, asg)?)),
        Pat::Tensor(c, l, r) => Ok(Term::tensor(*c, instantiate(l, asg)?, instantiate(r, asg)?)),
        Pat::Sugar(f, c, n, m) => {
            let n = n.eval(&asg.arities)?;
            let m = match m {
                Some(e) => Some(e.eval(&asg.arities)?),
                None => None,
            };
            Ok(Term::Sugar(*f, *c, n, m))
        }
    }
}

/// Infer arity-variable bindings from the types of assigned metavariables and
/// relation placeholders, so steps only need to spell out what is not
/// determined by their substitution.
pub fn infer_arities(
    vars: &SchemaVars,
    asg: &mut Assignment,
    sig: &Signature,
) -> Result<()> {
    let bind = |expr: &ArityExpr, val: u32, asg: &mut Assignment| -> Result<()> {
        if let Some(v) = expr.as_var() {
            match asg.arities.get(v) {
                Some(&prev) if prev != val => Err(Error::MetaConflict {
                    var: v.to_string(),
                    a: prev.to_string(),
                    b: val.to_string(),
                }),
                Some(_) => Ok(()),
                None => {
                    asg.arities.insert(v.to_string(), val);
                    Ok(())
                }
            }
        } else {
            // constant or composite: checked later by instantiation+typecheck
            Ok(())
        }
    };
    let rel_pairs: Vec<(String, PatType)> = vars
        .rels
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    for (ph, scheme) in rel_pairs {
        if let Some(name) = asg.rels.get(&ph).cloned() {
            let st = sig.get(&name)?;
            bind(&scheme.dom, st.ar, asg)?;
            bind(&scheme.cod, st.coar, asg)?;
        }
    }
    let meta_pairs: Vec<(String, PatType)> = vars
        .metas
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    for (mv, scheme) in meta_pairs {
        if let Some(t) = asg.terms.get(&mv).cloned() {
            let ty = crate::ty::typecheck(&t, sig)?;
            bind(&scheme.dom, ty.dom, asg)?;
            bind(&scheme.cod, ty.cod, asg)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_pattern_with_meta_and_sugar() {
        let p = Pat::parse("$a ;+ cp+@m").unwrap();
        let mut mv = Vec::new();
        p.metavars(&mut mv);
        assert_eq!(mv, vec!["$a"]);
        let p2 = Pat::parse("id+@n+m").unwrap();
        match p2 {
            Pat::Sugar(SugarFam::IdN, Color::White, e, None) => {
                assert_eq!(e, ArityExpr::var("n").plus_var("m"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symbolic_typing() {
        let mut vars = SchemaVars::default();
        vars.metas.insert(
            "$a".into(),
            PatType {
                dom: ArityExpr::var("n"),
                cod: ArityExpr::var("m"),
            },
        );
        let lhs = Pat::parse("$a ;+ cp+@m").unwrap();
        let rhs = Pat::parse("cp+@n ;+ ($a *+ $a)").unwrap();
        let lt = pat_typecheck(&lhs, &vars).unwrap();
        let rt = pat_typecheck(&rhs, &vars).unwrap();
        assert_eq!(lt, rt);
    }

    #[test]
    fn alpha_reverses_type() {
        let mut vars = SchemaVars::default();
        vars.metas.insert(
            "$a".into(),
            PatType {
                dom: ArityExpr::var("n"),
                cod: ArityExpr::var("m"),
            },
        );
        let p = Pat::parse("$a ;- alpha($a)").unwrap();
        let t = pat_typecheck(&p, &vars).unwrap();
        assert_eq!(t.dom, ArityExpr::var("n"));
        assert_eq!(t.cod, ArityExpr::var("n"));
    }
}
