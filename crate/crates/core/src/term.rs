use serde::{Deserialize, Serialize};

/// The two monoidal structures are distinguished by colour: white carries the
/// relational (existential) reading, black its De Morgan dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    /// Token suffix: `+` for white, `-` for black.
    pub fn sign(self) -> char {
        match self {
            Color::White => '+',
            Color::Black => '-',
        }
    }
}

/// Arity-one generator constants of the diagram language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GenKind {
    /// `cp` : 1 -> 2
    Copier,
    /// `dc` : 1 -> 0
    Discard,
    /// `cc` : 2 -> 1
    Cocopier,
    /// `cd` : 0 -> 1
    Codiscard,
    /// `e` : 0 -> 0
    Id0,
    /// `id` : 1 -> 1
    Id1,
    /// `sw` : 2 -> 2
    Symm,
}

impl GenKind {
    pub fn token(self) -> &'static str {
        match self {
            GenKind::Copier => "cp",
            GenKind::Discard => "dc",
            GenKind::Cocopier => "cc",
            GenKind::Codiscard => "cd",
            GenKind::Id0 => "e",
            GenKind::Id1 => "id",
            GenKind::Symm => "sw",
        }
    }

    pub fn arity(self) -> (u32, u32) {
        match self {
            GenKind::Copier => (1, 2),
            GenKind::Discard => (1, 0),
            GenKind::Cocopier => (2, 1),
            GenKind::Codiscard => (0, 1),
            GenKind::Id0 => (0, 0),
            GenKind::Id1 => (1, 1),
            GenKind::Symm => (2, 2),
        }
    }
}

/// n-ary sugar families, expanded by [`Term::desugar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SugarFam {
    CopierN,
    DiscardN,
    CocopierN,
    CodiscardN,
    IdN,
    /// `sw@n,m` : n+m -> m+n
    SymmNM,
}

impl SugarFam {
    pub fn token(self) -> &'static str {
        match self {
            SugarFam::CopierN => "cp",
            SugarFam::DiscardN => "dc",
            SugarFam::CocopierN => "cc",
            SugarFam::CodiscardN => "cd",
            SugarFam::IdN => "id",
            SugarFam::SymmNM => "sw",
        }
    }
}

/// A diagram term. Every constructor carries its colour; `Sugar` nodes stand
/// for the n-ary generator families and expand via [`Term::desugar`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Gen(GenKind, Color),
    /// `R^o` (white, ar -> coar) or `R^b` (black, coar -> ar).
    Rel(String, Color),
    Seq(Color, Box<Term>, Box<Term>),
    Tensor(Color, Box<Term>, Box<Term>),
    Sugar(SugarFam, Color, u32, Option<u32>),
}

impl Term {
    pub fn gen(kind: GenKind, color: Color) -> Term {
        Term::Gen(kind, color)
    }

    pub fn rel(name: impl Into<String>, color: Color) -> Term {
        Term::Rel(name.into(), color)
    }

    pub fn seq(color: Color, l: Term, r: Term) -> Term {
        Term::Seq(color, Box::new(l), Box::new(r))
    }

    pub fn tensor(color: Color, l: Term, r: Term) -> Term {
        Term::Tensor(color, Box::new(l), Box::new(r))
    }

    pub fn sugar(fam: SugarFam, color: Color, n: u32, m: Option<u32>) -> Term {
        Term::Sugar(fam, color, n, m)
    }

    /// White sequential composition, the common case in constructions.
    pub fn seqw(l: Term, r: Term) -> Term {
        Term::seq(Color::White, l, r)
    }

    pub fn id_n(color: Color, n: u32) -> Term {
        Term::sugar(SugarFam::IdN, color, n, None)
    }

    /// Fold a white ;-chain right-associatively. Panics on empty input.
    pub fn seq_chain(color: Color, parts: Vec<Term>) -> Term {
        let mut it = parts.into_iter().rev();
        let last = it.next().expect("seq_chain needs at least one part");
        it.fold(last, |acc, t| Term::seq(color, t, acc))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Seq(_, l, r) | Term::Tensor(_, l, r) => vec![l, r],
            _ => vec![],
        }
    }

    /// Expand all sugar nodes, following the inductive definitions of the
    /// n-ary families (copier via a symmetry block, dischargers pointwise,
    /// symmetries by peeling single wires).
    pub fn desugar(&self) -> Term {
        match self {
            Term::Gen(k, c) => Term::Gen(*k, *c),
            Term::Rel(n, c) => Term::Rel(n.clone(), *c),
            Term::Seq(c, l, r) => Term::seq(*c, l.desugar(), r.desugar()),
            Term::Tensor(c, l, r) => Term::tensor(*c, l.desugar(), r.desugar()),
            Term::Sugar(fam, c, n, m) => expand_sugar(*fam, *c, *n, *m),
        }
    }

    pub fn contains_sugar(&self) -> bool {
        match self {
            Term::Sugar(..) => true,
            Term::Seq(_, l, r) | Term::Tensor(_, l, r) => l.contains_sugar() || r.contains_sugar(),
            _ => false,
        }
    }
}

fn expand_sugar(fam: SugarFam, c: Color, n: u32, m: Option<u32>) -> Term {
    use GenKind::*;
    use SugarFam::*;
    match fam {
        IdN => id_expand(c, n),
        DiscardN => pointwise(c, Discard, n),
        CodiscardN => pointwise(c, Codiscard, n),
        CopierN => copier_expand(c, n, false),
        CocopierN => copier_expand(c, n, true),
        SymmNM => symm_expand(c, n, m.unwrap_or(0)),
    }
}

/// id_0 = e, id_{n+1} = id_1 (x) id_n
fn id_expand(c: Color, n: u32) -> Term {
    match n {
        0 => Term::Gen(GenKind::Id0, c),
        1 => Term::Gen(GenKind::Id1, c),
        _ => Term::tensor(c, Term::Gen(GenKind::Id1, c), id_expand(c, n - 1)),
    }
}

/// dc_0 = e, dc_{n+1} = dc_1 (x) dc_n; likewise codischargers.
fn pointwise(c: Color, k: GenKind, n: u32) -> Term {
    match n {
        0 => Term::Gen(GenKind::Id0, c),
        1 => Term::Gen(k, c),
        _ => Term::tensor(c, Term::Gen(k, c), pointwise(c, k, n - 1)),
    }
}

/// cp_0 = e; cp_{n+1} = (cp_1 (x) cp_n) ; (id_1 (x) sw_{1,n} (x) id_n).
/// The cocopier is the mirror image.
fn copier_expand(c: Color, n: u32, co: bool) -> Term {
    match n {
        0 => Term::Gen(GenKind::Id0, c),
        1 => Term::Gen(if co { GenKind::Cocopier } else { GenKind::Copier }, c),
        _ => {
            let wiring = Term::tensor(
                c,
                id_expand(c, 1),
                Term::tensor(c, symm_expand(c, 1, n - 1), id_expand(c, n - 1)),
            );
            let pair = Term::tensor(c, copier_expand(c, 1, co), copier_expand(c, n - 1, co));
            if co {
                Term::seq(c, wiring, pair)
            } else {
                Term::seq(c, pair, wiring)
            }
        }
    }
}

/// sw_{0,0} = e; sw_{1,0} = sw_{0,1} = id_1; sw_{0,n} = id_n;
/// sw_{1,n+1} = (sw_{1,n} (x) id_1) ; (id_n (x) sw_{1,1});
/// sw_{m+1,n} = (id_1 (x) sw_{m,n}) ; (sw_{1,n} (x) id_m).
fn symm_expand(c: Color, n: u32, m: u32) -> Term {
    match (n, m) {
        (0, k) | (k, 0) => id_expand(c, k),
        (1, 1) => Term::Gen(GenKind::Symm, c),
        (1, k) => Term::seq(
            c,
            Term::tensor(c, symm_expand(c, 1, k - 1), id_expand(c, 1)),
            Term::tensor(c, id_expand(c, k - 1), Term::Gen(GenKind::Symm, c)),
        ),
        (j, k) => Term::seq(
            c,
            Term::tensor(c, id_expand(c, 1), symm_expand(c, j - 1, k)),
            Term::tensor(c, symm_expand(c, 1, k), id_expand(c, j - 1)),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::ty::typecheck;

    #[test]
    fn sugar_expansions_typecheck() {
        let sig = Signature::default();
        for n in 0..5u32 {
            for (fam, dom, cod) in [
                (SugarFam::CopierN, n, 2 * n),
                (SugarFam::DiscardN, n, 0),
                (SugarFam::CocopierN, 2 * n, n),
                (SugarFam::CodiscardN, 0, n),
                (SugarFam::IdN, n, n),
            ] {
                for c in [Color::White, Color::Black] {
                    let t = Term::sugar(fam, c, n, None).desugar();
                    assert!(!t.contains_sugar());
                    let ty = typecheck(&t, &sig).unwrap();
                    assert_eq!((ty.dom, ty.cod), (dom, cod), "{fam:?}@{n}");
                }
            }
            for m in 0..5u32 {
                let t = Term::sugar(SugarFam::SymmNM, Color::White, n, Some(m)).desugar();
                let ty = typecheck(&t, &sig).unwrap();
                assert_eq!((ty.dom, ty.cod), (n + m, m + n));
            }
        }
    }

    #[test]
    fn degenerate_sugar() {
        // cp@0 = e, sw@1,0 = id, id@1 = id
        assert_eq!(
            Term::sugar(SugarFam::CopierN, Color::White, 0, None).desugar(),
            Term::Gen(GenKind::Id0, Color::White)
        );
        assert_eq!(
            Term::sugar(SugarFam::SymmNM, Color::White, 1, Some(0)).desugar(),
            Term::Gen(GenKind::Id1, Color::White)
        );
        assert_eq!(
            Term::sugar(SugarFam::IdN, Color::White, 1, None).desugar(),
            Term::Gen(GenKind::Id1, Color::White)
        );
    }
}
