use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Color, GenKind, SugarFam, Term};
use crate::ty::{typecheck, InterfaceType};

/// The colour-and-order reversing involution realizing the linear adjoint:
/// generators swap colour and (co)monoid role, `;` reverses with a colour
/// flip, tensors flip componentwise. Defined on sugar-free terms;
/// type-reversing (`alpha(c) : m -> n` for `c : n -> m`).
pub fn alpha(t: &Term) -> Term {
    match t {
        Term::Gen(k, c) => {
            let k2 = match k {
                GenKind::Copier => GenKind::Cocopier,
                GenKind::Cocopier => GenKind::Copier,
                GenKind::Discard => GenKind::Codiscard,
                GenKind::Codiscard => GenKind::Discard,
                GenKind::Id0 => GenKind::Id0,
                GenKind::Id1 => GenKind::Id1,
                GenKind::Symm => GenKind::Symm,
            };
            Term::Gen(k2, c.flip())
        }
        Term::Rel(name, c) => Term::Rel(name.clone(), c.flip()),
        Term::Seq(c, l, r) => Term::seq(c.flip(), alpha(r), alpha(l)),
        Term::Tensor(c, l, r) => Term::tensor(c.flip(), alpha(l), alpha(r)),
        Term::Sugar(..) => alpha(&t.desugar()),
    }
}

/// The converse (mirror image) by Frobenius wiring: for `t : n -> m`,
///
/// ```text
/// op(t) = (cup_n (x) id_m) ; (id_n (x) t (x) id_m) ; (id_n (x) cap_m)
/// ```
///
/// where `cup_n = cd@n ; cp@n : 0 -> 2n` and `cap_m = cc@m ; dc@m : 2m -> 0`,
/// all in the chosen colour. A pure wiring construction, no recursion.
pub fn dagger(t: &Term, color: Color, sig: &Signature) -> Result<Term> {
    let ty = typecheck(t, sig)?;
    let (n, m) = (ty.dom, ty.cod);
    let c = color;
    let id = |k: u32| Term::sugar(SugarFam::IdN, c, k, None);
    let cup = Term::seq(
        c,
        Term::sugar(SugarFam::CodiscardN, c, n, None),
        Term::sugar(SugarFam::CopierN, c, n, None),
    );
    let cap = Term::seq(
        c,
        Term::sugar(SugarFam::CocopierN, c, m, None),
        Term::sugar(SugarFam::DiscardN, c, m, None),
    );
    let first = Term::tensor(c, cup, id(m));
    let mid = Term::tensor(c, id(n), Term::tensor(c, t.clone(), id(m)));
    let last = Term::tensor(c, id(n), cap);
    Ok(Term::seq(c, first, Term::seq(c, mid, last)))
}

/// Negation: converse composed with the linear adjoint, `not(t) = op(alpha(t))`.
/// Type-preserving; its evaluation is the set complement.
pub fn negate(t: &Term, sig: &Signature) -> Result<Term> {
    let a = alpha(&t.desugar());
    dagger(&a, Color::White, sig)
}

fn same_type(a: &Term, b: &Term, sig: &Signature) -> Result<InterfaceType> {
    let ta = typecheck(a, sig)?;
    let tb = typecheck(b, sig)?;
    if ta != tb {
        return Err(Error::TypeMismatch {
            path: crate::path::Path::root(),
            msg: format!("expected equal interface types, found {ta} and {tb}"),
        });
    }
    Ok(ta)
}

/// `a ⊓ b`: the white copier sandwich.
pub fn meet(a: &Term, b: &Term, sig: &Signature) -> Result<Term> {
    let ty = same_type(a, b, sig)?;
    Ok(lattice_sandwich(a, b, ty, Color::White))
}

/// `a ⊔ b`: the black copier sandwich.
pub fn join(a: &Term, b: &Term, sig: &Signature) -> Result<Term> {
    let ty = same_type(a, b, sig)?;
    Ok(lattice_sandwich(a, b, ty, Color::Black))
}

fn lattice_sandwich(a: &Term, b: &Term, ty: InterfaceType, c: Color) -> Term {
    let cp = Term::sugar(SugarFam::CopierN, c, ty.dom, None);
    let cc = Term::sugar(SugarFam::CocopierN, c, ty.cod, None);
    Term::seq(c, cp, Term::seq(c, Term::tensor(c, a.clone(), b.clone()), cc))
}

/// `⊤ : n -> m` = `dc+@n ;+ cd+@m`.
pub fn top(n: u32, m: u32) -> Term {
    Term::seq(
        Color::White,
        Term::sugar(SugarFam::DiscardN, Color::White, n, None),
        Term::sugar(SugarFam::CodiscardN, Color::White, m, None),
    )
}

/// `⊥ : n -> m` = `dc-@n ;- cd-@m`.
pub fn bottom(n: u32, m: u32) -> Term {
    Term::seq(
        Color::Black,
        Term::sugar(SugarFam::DiscardN, Color::Black, n, None),
        Term::sugar(SugarFam::CodiscardN, Color::Black, m, None),
    )
}

/// Left residual of `b : Z -> Y` by `a : X -> Y`: the term `b ;- alpha(a) : Z -> X`.
pub fn residual_left(b: &Term, a: &Term, sig: &Signature) -> Result<Term> {
    let tb = typecheck(b, sig)?;
    let ta = typecheck(a, sig)?;
    if tb.cod != ta.cod {
        return Err(Error::TypeMismatch {
            path: crate::path::Path::root(),
            msg: format!("residual needs matching codomains: {} vs {}", tb.cod, ta.cod),
        });
    }
    Ok(Term::seq(Color::Black, b.clone(), alpha(&a.desugar())))
}

/// The name of `t : n -> m`: the closed-left diagram `0 -> n+m` obtained by
/// bending the inputs with a cup of the given colour.
pub fn name_of(t: &Term, color: Color, sig: &Signature) -> Result<Term> {
    let ty = typecheck(t, sig)?;
    let n = ty.dom;
    let c = color;
    let cup = Term::seq(
        c,
        Term::sugar(SugarFam::CodiscardN, c, n, None),
        Term::sugar(SugarFam::CopierN, c, n, None),
    );
    Ok(Term::seq(
        c,
        cup,
        Term::tensor(c, Term::sugar(SugarFam::IdN, c, n, None), t.clone()),
    ))
}

/// The closed scalar `0 -> 0` whose evaluation is truth exactly when
/// `eval(a) ⊆ eval(b)`: the black name of `b` residuated by the white name
/// of `a`. This is the closed form used when a theory is closed up.
pub fn entailment_scalar(a: &Term, b: &Term, sig: &Signature) -> Result<Term> {
    same_type(a, b, sig)?;
    let na = name_of(a, Color::White, sig)?;
    let nb = name_of(b, Color::Black, sig)?;
    Ok(Term::seq(Color::Black, nb, alpha(&na.desugar())))
}

/// The five equivalent sequent forms of entailment `a ⊑ b` at `n -> m`:
///
/// 1. `a ⊑ b`
/// 2. `id+@n ⊑ b ;- alpha(a)` (residuation)
/// 3. `id+@m ⊑ alpha(a) ;- b`
/// 4. `top(n,m) ⊑ not(a) ⊔ b`
/// 5. `e+ ⊑ <closed scalar>`
pub fn entailment_forms(a: &Term, b: &Term, sig: &Signature) -> Result<[(Term, Term); 5]> {
    let ty = same_type(a, b, sig)?;
    let (n, m) = (ty.dom, ty.cod);
    let aa = alpha(&a.desugar());
    let f1 = (a.clone(), b.clone());
    let f2 = (
        Term::sugar(SugarFam::IdN, Color::White, n, None),
        Term::seq(Color::Black, b.clone(), aa.clone()),
    );
    let f3 = (
        Term::sugar(SugarFam::IdN, Color::White, m, None),
        Term::seq(Color::Black, aa, b.clone()),
    );
    let f4 = (top(n, m), join(&negate(a, sig)?, b, sig)?);
    let f5 = (
        Term::Gen(GenKind::Id0, Color::White),
        entailment_scalar(a, b, sig)?,
    );
    Ok([f1, f2, f3, f4, f5])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::struct_eq;
    use crate::parse::parse;

    #[test]
    fn alpha_on_generators() {
        // copier-white maps to cocopier-black
        assert_eq!(
            alpha(&parse("cp+").unwrap()),
            parse("cc-").unwrap()
        );
        // composition reverses with colour flip
        let t = parse("R^o ;+ S^o").unwrap();
        assert_eq!(alpha(&t), parse("S^b ;- R^b").unwrap());
    }

    #[test]
    fn alpha_involution_exact() {
        for s in [
            "cp+ ;+ (R^o *+ S^o)",
            "(R^b ;- cp-) *- sw-",
            "cd+ ;+ ((id- *- cd-) ;- R^o)",
        ] {
            let t = parse(s).unwrap().desugar();
            assert_eq!(alpha(&alpha(&t)), t);
        }
    }

    #[test]
    fn dagger_types_reverse() {
        let sig = Signature::new().with("R", 2, 1);
        let t = parse("R^o").unwrap();
        let d = dagger(&t, Color::White, &sig).unwrap();
        let ty = typecheck(&d, &sig).unwrap();
        assert_eq!((ty.dom, ty.cod), (1, 2));
    }

    #[test]
    fn negate_preserves_type() {
        let sig = Signature::new().with("R", 1, 1);
        let t = parse("R^o").unwrap();
        let nt = negate(&t, &sig).unwrap();
        let ty = typecheck(&nt, &sig).unwrap();
        assert_eq!((ty.dom, ty.cod), (1, 1));
    }

    #[test]
    fn meet_is_the_example_sandwich() {
        let sig = Signature::new().with("R", 1, 1).with("S", 1, 1);
        let m = meet(&parse("R^o").unwrap(), &parse("S^o").unwrap(), &sig).unwrap();
        assert!(struct_eq(&m, &parse("cp+ ;+ (R^o *+ S^o) ;+ cc+").unwrap()));
    }

    #[test]
    fn entailment_form4_lhs_is_top() {
        let sig = Signature::new().with("R", 1, 1);
        let r = parse("R^o").unwrap();
        let forms = entailment_forms(&r, &r, &sig).unwrap();
        assert!(struct_eq(&forms[3].0, &top(1, 1)));
        // form (1) for a = b is the reflexive sequent
        assert_eq!(forms[0].0, forms[0].1);
    }
}
