use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Color, GenKind, Term};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// A tuple of domain elements; the length-0 tuple is the unit element.
pub type Tuple = Vec<u8>;

/// A finite relation between tuple spaces `X^dom_arity` and `X^cod_arity`,
/// stored as a sorted duplicate-free pair set for canonical equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub dom_arity: u32,
    pub cod_arity: u32,
    pub pairs: BTreeSet<(Tuple, Tuple)>,
}

impl Relation {
    pub fn empty(dom_arity: u32, cod_arity: u32) -> Relation {
        Relation {
            dom_arity,
            cod_arity,
            pairs: BTreeSet::new(),
        }
    }

    pub fn contains(&self, x: &Tuple, y: &Tuple) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// All tuples of length `k` over `0..size`.
    pub fn tuples(size: u8, k: u32) -> Vec<Tuple> {
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(out.len() * size as usize);
            for t in &out {
                for x in 0..size {
                    let mut t2 = t.clone();
                    t2.push(x);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }

    /// The full relation over a domain of the given size.
    pub fn full(size: u8, dom_arity: u32, cod_arity: u32) -> Relation {
        let mut pairs = BTreeSet::new();
        for x in Self::tuples(size, dom_arity) {
            for y in Self::tuples(size, cod_arity) {
                pairs.insert((x.clone(), y));
            }
        }
        Relation {
            dom_arity,
            cod_arity,
            pairs,
        }
    }

    pub fn complement(&self, size: u8) -> Relation {
        let mut out = Relation::empty(self.dom_arity, self.cod_arity);
        for x in Self::tuples(size, self.dom_arity) {
            for y in Self::tuples(size, self.cod_arity) {
                if !self.pairs.contains(&(x.clone(), y.clone())) {
                    out.pairs.insert((x.clone(), y));
                }
            }
        }
        out
    }

    pub fn converse(&self) -> Relation {
        Relation {
            dom_arity: self.cod_arity,
            cod_arity: self.dom_arity,
            pairs: self.pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    /// Single-valued and total as a relation `X^n -> X^m`.
    pub fn is_map(&self, size: u8) -> bool {
        for x in Self::tuples(size, self.dom_arity) {
            let images: Vec<_> = self
                .pairs
                .iter()
                .filter(|(a, _)| *a == x)
                .map(|(_, b)| b)
                .collect();
            if images.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// A finite interpretation: a domain `{0, …, domain_size-1}` (possibly empty)
/// and a relation table per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub domain_size: u8,
    pub rho: BTreeMap<String, Relation>,
}

impl Interpretation {
    pub fn new(domain_size: u8) -> Interpretation {
        Interpretation {
            domain_size,
            rho: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, rel: Relation) -> Interpretation {
        self.rho.insert(name.to_string(), rel);
        self
    }

    pub fn get(&self, name: &str) -> Result<&Relation> {
        self.rho
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Check the tables against a signature.
    pub fn conforms(&self, sig: &Signature) -> Result<()> {
        for (name, st) in &sig.symbols {
            let r = self.get(name)?;
            if r.dom_arity != st.ar || r.cod_arity != st.coar {
                return Err(Error::ArityMismatch(format!(
                    "table for `{name}` has arities ({}, {}), signature says ({}, {})",
                    r.dom_arity, r.cod_arity, st.ar, st.coar
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Interpretation> {
        #[derive(Deserialize)]
        struct File {
            domain: u8,
            #[serde(default)]
            rels: BTreeMap<String, Vec<(Tuple, Tuple)>>,
            #[serde(default)]
            arities: BTreeMap<String, (u32, u32)>,
        }
        let f: File =
            serde_json::from_str(text).map_err(|e| Error::Io(format!("interpretation file: {e}")))?;
        let mut interp = Interpretation::new(f.domain);
        for (name, pairs) in f.rels {
            let (da, ca) = match f.arities.get(&name) {
                Some(&(a, b)) => (a, b),
                None => match pairs.first() {
                    Some((x, y)) => (x.len() as u32, y.len() as u32),
                    None => (0, 0),
                },
            };
            let mut rel = Relation::empty(da, ca);
            for (x, y) in pairs {
                if x.iter().chain(y.iter()).any(|&v| v >= f.domain) {
                    return Err(Error::ArityMismatch(format!(
                        "tuple entry out of domain range in table for `{name}`"
                    )));
                }
                rel.pairs.insert((x, y));
            }
            interp.rho.insert(name, rel);
        }
        Ok(interp)
    }
}

/// White relational composition: the existential clause.
pub fn compose_white(r: &Relation, s: &Relation) -> Result<Relation> {
    if r.cod_arity != s.dom_arity {
        return Err(Error::ArityMismatch(format!(
            "compose: {} vs {}",
            r.cod_arity, s.dom_arity
        )));
    }
    let mut out = Relation::empty(r.dom_arity, s.cod_arity);
    for (x, y) in &r.pairs {
        for (y2, z) in &s.pairs {
            if y == y2 {
                out.pairs.insert((x.clone(), z.clone()));
            }
        }
    }
    Ok(out)
}

/// Black composition, evaluated directly from its universal clause:
/// `(x,z)` is in the composite iff for all middle tuples `y`, `(x,y) ∈ R` or
/// `(y,z) ∈ S`. The De Morgan shortcut is a test, not the definition.
pub fn compose_black(r: &Relation, s: &Relation, size: u8) -> Result<Relation> {
    if r.cod_arity != s.dom_arity {
        return Err(Error::ArityMismatch(format!(
            "compose: {} vs {}",
            r.cod_arity, s.dom_arity
        )));
    }
    let mids = Relation::tuples(size, r.cod_arity);
    let mut out = Relation::empty(r.dom_arity, s.cod_arity);
    for x in Relation::tuples(size, r.dom_arity) {
        for z in Relation::tuples(size, s.cod_arity) {
            let holds = mids
                .iter()
                .all(|y| r.contains(&x, y) || s.contains(y, &z));
            if holds {
                out.pairs.insert((x.clone(), z.clone()));
            }
        }
    }
    Ok(out)
}

/// White monoidal product: conjunction of the component memberships.
pub fn tensor_white(r: &Relation, s: &Relation) -> Relation {
    let mut out = Relation::empty(r.dom_arity + s.dom_arity, r.cod_arity + s.cod_arity);
    for (x, y) in &r.pairs {
        for (v, w) in &s.pairs {
            let mut xv = x.clone();
            xv.extend_from_slice(v);
            let mut yw = y.clone();
            yw.extend_from_slice(w);
            out.pairs.insert((xv, yw));
        }
    }
    out
}

/// Black monoidal product: disjunction of the component memberships.
pub fn tensor_black(r: &Relation, s: &Relation, size: u8) -> Relation {
    let mut out = Relation::empty(r.dom_arity + s.dom_arity, r.cod_arity + s.cod_arity);
    for x in Relation::tuples(size, r.dom_arity) {
        for y in Relation::tuples(size, r.cod_arity) {
            for v in Relation::tuples(size, s.dom_arity) {
                for w in Relation::tuples(size, s.cod_arity) {
                    if r.contains(&x, &y) || s.contains(&v, &w) {
                        let mut xv = x.clone();
                        xv.extend_from_slice(&v);
                        let mut yw = y.clone();
                        yw.extend_from_slice(&w);
                        out.pairs.insert((xv, yw));
                    }
                }
            }
        }
    }
    out
}

fn generator_relation(k: GenKind, color: Color, size: u8) -> Relation {
    let n = size;
    let mut white = match k {
        GenKind::Copier => {
            let mut r = Relation::empty(1, 2);
            for x in 0..n {
                r.pairs.insert((vec![x], vec![x, x]));
            }
            r
        }
        GenKind::Discard => {
            let mut r = Relation::empty(1, 0);
            for x in 0..n {
                r.pairs.insert((vec![x], vec![]));
            }
            r
        }
        GenKind::Cocopier => {
            let mut r = Relation::empty(2, 1);
            for x in 0..n {
                r.pairs.insert((vec![x, x], vec![x]));
            }
            r
        }
        GenKind::Codiscard => {
            let mut r = Relation::empty(0, 1);
            for x in 0..n {
                r.pairs.insert((vec![], vec![x]));
            }
            r
        }
        GenKind::Id0 => {
            let mut r = Relation::empty(0, 0);
            r.pairs.insert((vec![], vec![]));
            r
        }
        GenKind::Id1 => {
            let mut r = Relation::empty(1, 1);
            for x in 0..n {
                r.pairs.insert((vec![x], vec![x]));
            }
            r
        }
        GenKind::Symm => {
            let mut r = Relation::empty(2, 2);
            for x in 0..n {
                for y in 0..n {
                    r.pairs.insert((vec![x, y], vec![y, x]));
                }
            }
            r
        }
    };
    match color {
        Color::White => white,
        // The black generator is the set complement of the white one at the
        // same arities (difference relation for identities and symmetries,
        // empty dischargers over empty complements, ...).
        Color::Black => {
            white = white.complement(size);
            white
        }
    }
}

/// The compositional evaluator, clause by clause.
pub fn eval(t: &Term, interp: &Interpretation) -> Result<Relation> {
    let size = interp.domain_size;
    match t {
        Term::Gen(k, c) => Ok(generator_relation(*k, *c, size)),
        Term::Rel(name, c) => {
            let r = interp.get(name)?;
            match c {
                Color::White => Ok(r.clone()),
                // converse of the complement
                Color::Black => Ok(r.complement(size).converse()),
            }
        }
        Term::Seq(c, l, r) => {
            let lr = eval(l, interp)?;
            let rr = eval(r, interp)?;
            match c {
                Color::White => compose_white(&lr, &rr),
                Color::Black => compose_black(&lr, &rr, size),
            }
        }
        Term::Tensor(c, l, r) => {
            let lr = eval(l, interp)?;
            let rr = eval(r, interp)?;
            Ok(match c {
                Color::White => tensor_white(&lr, &rr),
                Color::Black => tensor_black(&lr, &rr, size),
            })
        }
        Term::Sugar(..) => eval(&t.desugar(), interp),
    }
}

/// `eval(c) ⊆ eval(d)` on one interpretation.
pub fn semantic_includes(c: &Term, d: &Term, interp: &Interpretation) -> Result<bool> {
    let rc = eval(c, interp)?;
    let rd = eval(d, interp)?;
    if rc.dom_arity != rd.dom_arity || rc.cod_arity != rd.cod_arity {
        return Err(Error::TypeMismatch {
            path: crate::path::Path::root(),
            msg: "semantic inclusion needs equal interface types".into(),
        });
    }
    Ok(rc.is_subset(&rd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn interp2() -> Interpretation {
        let mut r = Relation::empty(1, 1);
        r.pairs.insert((vec![0], vec![0]));
        r.pairs.insert((vec![0], vec![1]));
        let mut s = Relation::empty(1, 1);
        s.pairs.insert((vec![0], vec![0]));
        s.pairs.insert((vec![1], vec![0]));
        Interpretation::new(2).with("R", r).with("S", s)
    }

    #[test]
    fn top_is_all_pairs() {
        let t = parse("dc+ ;+ cd+").unwrap();
        let r = eval(&t, &Interpretation::new(2)).unwrap();
        assert_eq!(r.pairs.len(), 4);
    }

    #[test]
    fn empty_domain_truth_and_falsity() {
        let i0 = Interpretation::new(0);
        let cd = eval(&parse("cd+").unwrap(), &i0).unwrap();
        assert!(cd.pairs.is_empty());
        let e = eval(&parse("e+").unwrap(), &i0).unwrap();
        assert_eq!(e.pairs.len(), 1);
        let emin = eval(&parse("e-").unwrap(), &i0).unwrap();
        assert!(emin.pairs.is_empty());
    }

    #[test]
    fn meet_example_is_intersection() {
        let i = interp2();
        let m = eval(&parse("cp+ ;+ (R^o *+ S^o) ;+ cc+").unwrap(), &i).unwrap();
        let r = i.get("R").unwrap();
        let s = i.get("S").unwrap();
        let expect: BTreeSet<_> = r.pairs.intersection(&s.pairs).cloned().collect();
        assert_eq!(m.pairs, expect);
    }

    #[test]
    fn black_identity_is_difference() {
        let r = eval(&parse("id-").unwrap(), &Interpretation::new(2)).unwrap();
        let expect: BTreeSet<(Tuple, Tuple)> =
            [(vec![0], vec![1]), (vec![1], vec![0])].into_iter().map(|(a, b)| (a, b)).collect();
        assert_eq!(r.pairs, expect);
    }

    #[test]
    fn compose_black_singleton() {
        // over |X|=1 with R = S = {((0),(0))}: the universal clause holds
        let mut r = Relation::empty(1, 1);
        r.pairs.insert((vec![0], vec![0]));
        let out = compose_black(&r, &r, 1).unwrap();
        assert!(out.contains(&vec![0], &vec![0]));
        assert_eq!(out.pairs.len(), 1);
    }

    #[test]
    fn compose_black_empty_domain() {
        let r = Relation::empty(1, 1);
        let out = compose_black(&r, &r, 0).unwrap();
        assert!(out.pairs.is_empty());
    }

    #[test]
    fn black_rel_is_converse_complement() {
        let i = interp2();
        let rb = eval(&parse("R^b").unwrap(), &i).unwrap();
        let expect = i.get("R").unwrap().complement(2).converse();
        assert_eq!(rb, expect);
    }

    #[test]
    fn map_detection() {
        let id = generator_relation(GenKind::Id1, Color::White, 2);
        assert!(id.is_map(2));
        let empty = Relation::empty(1, 1);
        assert!(!empty.is_map(1), "empty relation is not total");
        let full = Relation::full(2, 1, 1);
        assert!(!full.is_map(2), "full relation is not single-valued");
    }
}
