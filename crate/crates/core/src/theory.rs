use crate::error::{Error, Result};
use crate::parse::parse;
use crate::print::render;
use crate::rel::{semantic_includes, Interpretation};
use crate::signature::Signature;
use crate::term::{Color, GenKind, SugarFam, Term};
use crate::ty::typecheck;
use serde::Deserialize;

/// A named inclusion axiom `lhs ⊑ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryAxiom {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

/// A first order theory: a signature plus inclusion axioms. Theory axioms are
/// used forward only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Theory {
    pub sig: Signature,
    pub axioms: Vec<TheoryAxiom>,
}

impl Theory {
    pub fn new(sig: Signature) -> Theory {
        Theory {
            sig,
            axioms: Vec::new(),
        }
    }

    pub fn push_axiom(&mut self, name: &str, lhs: Term, rhs: Term) -> Result<()> {
        let lt = typecheck(&lhs, &self.sig)?;
        let rt = typecheck(&rhs, &self.sig)?;
        if lt != rt {
            return Err(Error::TypeMismatch {
                path: crate::path::Path::root(),
                msg: format!("axiom `{name}` relates {lt} and {rt}"),
            });
        }
        self.axioms.push(TheoryAxiom {
            name: name.to_string(),
            lhs,
            rhs,
        });
        Ok(())
    }

    pub fn axiom(&self, name: &str) -> Option<&TheoryAxiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// Extend with the closed axiom `(e+, c)` for a scalar `c : 0 -> 0`.
    pub fn extended_with_scalar(&self, name: &str, c: &Term) -> Result<Theory> {
        let ty = typecheck(c, &self.sig)?;
        if (ty.dom, ty.cod) != (0, 0) {
            return Err(Error::NotClosedFormula(ty.to_string()));
        }
        let mut t2 = self.clone();
        t2.push_axiom(name, Term::Gen(GenKind::Id0, Color::White), c.clone())?;
        Ok(t2)
    }

    /// Theory file: `{"signature": {...}, "axioms": [{"name","lhs","rhs"}]}`.
    pub fn from_json(text: &str) -> Result<Theory> {
        #[derive(Deserialize)]
        struct AxRow {
            name: String,
            lhs: String,
            rhs: String,
        }
        #[derive(Deserialize)]
        struct File {
            signature: Signature,
            #[serde(default)]
            axioms: Vec<AxRow>,
        }
        let f: File =
            serde_json::from_str(text).map_err(|e| Error::Io(format!("theory file: {e}")))?;
        let mut th = Theory::new(f.signature);
        for ax in f.axioms {
            th.push_axiom(&ax.name, parse(&ax.lhs)?, parse(&ax.rhs)?)?;
        }
        Ok(th)
    }

    pub fn to_json(&self) -> String {
        let axioms: Vec<serde_json::Value> = self
            .axioms
            .iter()
            .map(|a| {
                serde_json::json!({
                    "name": a.name,
                    "lhs": render(&a.lhs),
                    "rhs": render(&a.rhs),
                })
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "signature": self.sig,
            "axioms": axioms,
        }))
        .expect("theory serializes")
    }
}

/// True iff every axiom inclusion holds in the interpretation.
pub fn is_model(interp: &Interpretation, theory: &Theory) -> Result<bool> {
    interp.conforms(&theory.sig)?;
    for ax in &theory.axioms {
        if !semantic_includes(&ax.lhs, &ax.rhs, interp)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two inequalities forcing `f : n -> 1` to be a function:
/// `f ; cp ≤ cp_n ; (f (x) f)` (single-valued) and `dc_n ≤ f ; dc` (total).
pub fn tmap_axioms(f: &str, sig: &Signature) -> Result<[(Term, Term); 2]> {
    let st = sig.get(f)?;
    if st.coar != 1 {
        return Err(Error::ArityMismatch(format!(
            "TMAP needs coarity 1, `{f}` has coarity {}",
            st.coar
        )));
    }
    let n = st.ar;
    let w = Color::White;
    let fo = Term::rel(f, w);
    let single = (
        Term::seq(w, fo.clone(), Term::Gen(GenKind::Copier, w)),
        Term::seq(
            w,
            Term::sugar(SugarFam::CopierN, w, n, None),
            Term::tensor(w, fo.clone(), fo.clone()),
        ),
    );
    let total = (
        Term::sugar(SugarFam::DiscardN, w, n, None),
        Term::seq(w, fo, Term::Gen(GenKind::Discard, w)),
    );
    Ok([single, total])
}

/// Attach TMAP axioms for a function symbol to a theory.
pub fn push_tmap(theory: &mut Theory, f: &str) -> Result<()> {
    let [single, total] = tmap_axioms(f, &theory.sig)?;
    theory.push_axiom(&format!("{f}.single"), single.0, single.1)?;
    theory.push_axiom(&format!("{f}.total"), total.0, total.1)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel::Relation;

    /// The linear-order theory: reflexivity, transitivity, antisymmetry,
    /// totality for one binary symbol.
    pub fn linear_order() -> Theory {
        let sig = Signature::new().with("R", 1, 1);
        let mut th = Theory::new(sig.clone());
        let r = Term::rel("R", Color::White);
        let id = Term::Gen(GenKind::Id1, Color::White);
        th.push_axiom("refl", id.clone(), r.clone()).unwrap();
        th.push_axiom("trans", Term::seqw(r.clone(), r.clone()), r.clone())
            .unwrap();
        let rdag = crate::derived::dagger(&r, Color::White, &sig).unwrap();
        let antis = crate::derived::meet(&r, &rdag, &sig).unwrap();
        th.push_axiom("antisym", antis, id).unwrap();
        let total = crate::derived::join(&r, &rdag, &sig).unwrap();
        th.push_axiom("total", crate::derived::top(1, 1), total).unwrap();
        th
    }

    #[test]
    fn empty_theory_has_all_models() {
        let th = Theory::new(Signature::new());
        assert!(is_model(&Interpretation::new(0), &th).unwrap());
        assert!(is_model(&Interpretation::new(3), &th).unwrap());
    }

    #[test]
    fn nonempty_set_theory_rejects_empty_model() {
        // axiom: e+ <= dc+ ;+ cd+ ... wait, cd+ ;+ dc+ is the 0->0 scalar
        let mut th = Theory::new(Signature::new());
        th.push_axiom(
            "nonempty",
            Term::Gen(GenKind::Id0, Color::White),
            Term::seqw(
                Term::Gen(GenKind::Codiscard, Color::White),
                Term::Gen(GenKind::Discard, Color::White),
            ),
        )
        .unwrap();
        assert!(!is_model(&Interpretation::new(0), &th).unwrap());
        assert!(is_model(&Interpretation::new(1), &th).unwrap());
    }

    #[test]
    fn linear_order_model() {
        let th = linear_order();
        // X = {0,1}, R = {(0,0),(0,1),(1,1)} is a linear order
        let mut r = Relation::empty(1, 1);
        for (a, b) in [(0, 0), (0, 1), (1, 1)] {
            r.pairs.insert((vec![a], vec![b]));
        }
        let interp = Interpretation::new(2).with("R", r);
        assert!(is_model(&interp, &th).unwrap());
        // dropping reflexivity breaks it
        let mut r2 = Relation::empty(1, 1);
        r2.pairs.insert((vec![0], vec![1]));
        let interp2 = Interpretation::new(2).with("R", r2);
        assert!(!is_model(&interp2, &th).unwrap());
    }

    #[test]
    fn tmap_ground_cases() {
        let sig = Signature::new().with("k", 0, 1);
        let [single, total] = tmap_axioms("k", &sig).unwrap();
        // for k : 0 -> 1 the totality sequent specializes to e+ <= k ; dc+
        assert!(crate::normalize::struct_eq(
            &total.0,
            &Term::Gen(GenKind::Id0, Color::White)
        ));
        let _ = single;
        // a function table satisfies both; an empty one violates totality
        let mut ktab = Relation::empty(0, 1);
        ktab.pairs.insert((vec![], vec![0]));
        let mut th = Theory::new(sig.clone());
        push_tmap(&mut th, "k").unwrap();
        let good = Interpretation::new(1).with("k", ktab);
        assert!(is_model(&good, &th).unwrap());
        let bad = Interpretation::new(1).with("k", Relation::empty(0, 1));
        assert!(!is_model(&bad, &th).unwrap());
    }
}
