use crate::term::{Color, GenKind, Term};

/// Structural normal form: associativity and unit laws only.
///
/// `;` and `*` chains are flattened per colour and rebuilt right-nested, the
/// unit terms (`e` for tensors, identity-only blocks for compositions of the
/// same colour) are dropped. Interchange and the symmetry laws are *not*
/// applied; they are proof rules. The input must be sugar-free.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Gen(..) | Term::Rel(..) => t.clone(),
        Term::Sugar(..) => normalize(&t.desugar()),
        Term::Seq(c, _, _) => {
            let mut parts = Vec::new();
            flatten_seq(t, *c, &mut parts);
            let kept: Vec<Term> = parts.into_iter().filter(|p| !is_identity_block(p, *c)).collect();
            if kept.is_empty() {
                // `id_n ; id_n` collapses to the identity on the interface.
                // Rebuild it from the original's left spine.
                identity_of(t, *c)
            } else {
                rebuild(kept, |l, r| Term::seq(*c, l, r))
            }
        }
        Term::Tensor(c, _, _) => {
            let mut parts = Vec::new();
            flatten_tensor(t, *c, &mut parts);
            let kept: Vec<Term> = parts
                .into_iter()
                .filter(|p| !matches!(p, Term::Gen(GenKind::Id0, cc) if cc == c))
                .collect();
            if kept.is_empty() {
                Term::Gen(GenKind::Id0, *c)
            } else {
                rebuild(kept, |l, r| Term::tensor(*c, l, r))
            }
        }
    }
}

fn flatten_seq(t: &Term, c: Color, out: &mut Vec<Term>) {
    match t {
        Term::Seq(cc, l, r) if *cc == c => {
            flatten_seq(l, c, out);
            flatten_seq(r, c, out);
        }
        _ => {
            // a child may only expose a same-colour chain after its own
            // units are absorbed; re-flatten in that case
            let n = normalize(t);
            match n {
                Term::Seq(cc, ref l, ref r) if cc == c => {
                    flatten_seq(l, c, out);
                    flatten_seq(r, c, out);
                }
                other => out.push(other),
            }
        }
    }
}

fn flatten_tensor(t: &Term, c: Color, out: &mut Vec<Term>) {
    match t {
        Term::Tensor(cc, l, r) if *cc == c => {
            flatten_tensor(l, c, out);
            flatten_tensor(r, c, out);
        }
        _ => {
            let n = normalize(t);
            match n {
                Term::Tensor(cc, ref l, ref r) if cc == c => {
                    flatten_tensor(l, c, out);
                    flatten_tensor(r, c, out);
                }
                other => out.push(other),
            }
        }
    }
}

fn rebuild(parts: Vec<Term>, mk: impl Fn(Term, Term) -> Term) -> Term {
    let mut it = parts.into_iter().rev();
    let last = it.next().unwrap();
    it.fold(last, |acc, x| mk(x, acc))
}

/// A `;c`-unit: built from identities of colour `c` using tensors only.
/// (`e+` is the white composition unit at 0 -> 0, `id+ *+ id+` at 2 -> 2...)
fn is_identity_block(t: &Term, c: Color) -> bool {
    match t {
        Term::Gen(GenKind::Id0, cc) | Term::Gen(GenKind::Id1, cc) => *cc == c,
        Term::Tensor(tc, l, r) => *tc == c && is_identity_block(l, c) && is_identity_block(r, c),
        _ => false,
    }
}

/// Identity of colour `c` on the domain interface of `t` (used when a whole
/// `;`-chain collapses). The width is read off the leftmost factor.
fn identity_of(t: &Term, c: Color) -> Term {
    fn width(t: &Term) -> u32 {
        match t {
            Term::Gen(GenKind::Id0, _) => 0,
            Term::Gen(GenKind::Id1, _) => 1,
            Term::Tensor(_, l, r) => width(l) + width(r),
            Term::Seq(_, l, _) => width(l),
            _ => 0,
        }
    }
    let n = width(t);
    match n {
        0 => Term::Gen(GenKind::Id0, c),
        1 => Term::Gen(GenKind::Id1, c),
        _ => rebuild(
            std::iter::repeat(Term::Gen(GenKind::Id1, c)).take(n as usize).collect(),
            |l, r| Term::tensor(c, l, r),
        ),
    }
}

/// Equality modulo desugaring and structural (assoc/unit) normalisation.
pub fn struct_eq(a: &Term, b: &Term) -> bool {
    normalize(&a.desugar()) == normalize(&b.desugar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn n(s: &str) -> Term {
        normalize(&parse(s).unwrap().desugar())
    }

    #[test]
    fn assoc_right() {
        assert_eq!(n("(R^o ;+ S^o) ;+ R^o"), n("R^o ;+ (S^o ;+ R^o)"));
        assert_eq!(n("(R^o *+ S^o) *+ R^o"), n("R^o *+ (S^o *+ R^o)"));
    }

    #[test]
    fn units_absorbed() {
        assert_eq!(n("e+ *+ cp+"), n("cp+"));
        assert_eq!(n("id+ ;+ R^o"), n("R^o"));
        assert_eq!(n("R^o ;+ id+"), n("R^o"));
        assert_eq!(n("(id+ *+ id+) ;+ sw+"), n("sw+"));
        assert_eq!(n("cp+ ;+ (id+ *+ id+)"), n("cp+"));
        // an all-identity chain keeps its interface
        assert_eq!(n("id+ ;+ id+"), parse("id+").unwrap());
        assert_eq!(n("e- ;- e-"), parse("e-").unwrap());
    }

    #[test]
    fn colour_mismatched_units_stay() {
        // e- is not the white tensor unit, id- not the white ; unit
        assert_ne!(n("e- *+ cp+"), n("cp+"));
        assert_ne!(n("id- ;+ R^o"), n("R^o"));
        // but a black unit in a black context goes
        assert_eq!(n("id- ;- R^b"), n("R^b"));
    }

    #[test]
    fn idempotent() {
        for s in ["(R^o ;+ S^o) ;+ (id+ ;+ R^o)", "cp+@3 ;+ (dc+@3 *+ id+@3)"] {
            let once = n(s);
            assert_eq!(normalize(&once), once);
        }
    }

    #[test]
    fn symmetry_involution_is_not_structural() {
        assert_ne!(n("sw+ ;+ sw+"), n("id+@2"));
        assert!(!struct_eq(&parse("cp+").unwrap(), &parse("cc+").unwrap()));
    }
}
