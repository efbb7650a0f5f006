//! Seeded random generators for terms and bridge-language expressions, used
//! by the soundness fuzzer and the test suites.

use crate::signature::Signature;
use crate::term::{Color, SugarFam, Term};
use rand::Rng;

fn random_color<R: Rng>(rng: &mut R) -> Color {
    if rng.gen_bool(0.5) {
        Color::White
    } else {
        Color::Black
    }
}

/// An arbitrary atomic term of the requested interface type. Always succeeds:
/// the white top / black bottom sandwich fits any type.
fn atom<R: Rng>(rng: &mut R, sig: &Signature, dom: u32, cod: u32) -> Term {
    let mut candidates: Vec<Term> = Vec::new();
    for (name, st) in &sig.symbols {
        if (st.ar, st.coar) == (dom, cod) {
            candidates.push(Term::rel(name, Color::White));
        }
        if (st.coar, st.ar) == (dom, cod) {
            candidates.push(Term::rel(name, Color::Black));
        }
    }
    for c in [Color::White, Color::Black] {
        if dom == cod {
            candidates.push(Term::sugar(SugarFam::IdN, c, dom, None));
        }
        if cod == 0 {
            candidates.push(Term::sugar(SugarFam::DiscardN, c, dom, None));
        }
        if dom == 0 {
            candidates.push(Term::sugar(SugarFam::CodiscardN, c, cod, None));
        }
        if cod == 2 * dom && dom > 0 {
            candidates.push(Term::sugar(SugarFam::CopierN, c, dom, None));
        }
        if dom == 2 * cod && cod > 0 {
            candidates.push(Term::sugar(SugarFam::CocopierN, c, cod, None));
        }
        if dom == cod && dom >= 2 {
            let n = rng.gen_range(1..dom);
            candidates.push(Term::sugar(SugarFam::SymmNM, c, n, Some(dom - n)));
        }
    }
    // top / bottom always fit
    let c = random_color(rng);
    candidates.push(Term::seq(
        c,
        Term::sugar(SugarFam::DiscardN, c, dom, None),
        Term::sugar(SugarFam::CodiscardN, c, cod, None),
    ));
    let i = rng.gen_range(0..candidates.len());
    candidates.swap_remove(i)
}

/// A random well-typed term `dom -> cod` with composition depth `<= depth`.
pub fn random_term<R: Rng>(rng: &mut R, sig: &Signature, dom: u32, cod: u32, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return atom(rng, sig, dom, cod);
    }
    match rng.gen_range(0..3u8) {
        0 => {
            let mid = rng.gen_range(0..=2u32);
            let c = random_color(rng);
            Term::seq(
                c,
                random_term(rng, sig, dom, mid, depth - 1),
                random_term(rng, sig, mid, cod, depth - 1),
            )
        }
        1 if dom + cod > 0 => {
            let d1 = if dom == 0 { 0 } else { rng.gen_range(0..=dom) };
            let c1 = if cod == 0 { 0 } else { rng.gen_range(0..=cod) };
            let c = random_color(rng);
            Term::tensor(
                c,
                random_term(rng, sig, d1, c1, depth - 1),
                random_term(rng, sig, dom - d1, cod - c1, depth - 1),
            )
        }
        _ => atom(rng, sig, dom, cod),
    }
}

/// One random full assignment for a schema's variables over the signature:
/// arity variables in `0..=2`, relation placeholders resolved to fitting
/// symbols, metavariables to random terms of the scheme's type. Returns the
/// instantiated sides, or `None` when no symbol fits a placeholder.
pub fn random_schema_instance<R: Rng>(
    rng: &mut R,
    schema: &crate::catalog::AxiomSchema,
    sig: &Signature,
) -> crate::error::Result<Option<(Term, Term)>> {
    use crate::pattern::{instantiate, Assignment};
    let mut asg = Assignment::default();
    let mut vars: Vec<String> = Vec::new();
    let collect = |t: &crate::pattern::PatType, vars: &mut Vec<String>| {
        for v in t.dom.vars.keys().chain(t.cod.vars.keys()) {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    };
    for t in schema.vars.metas.values() {
        collect(t, &mut vars);
    }
    for t in schema.vars.rels.values() {
        collect(t, &mut vars);
    }
    // resolve relation placeholders first; they may pin arity variables
    for (ph, scheme) in &schema.vars.rels {
        let candidates: Vec<(&String, crate::signature::SymbolType)> = sig
            .symbols
            .iter()
            .filter(|(_, st)| {
                let dom_ok = match (scheme.dom.as_const(), scheme.dom.as_var()) {
                    (Some(k), _) => k == st.ar,
                    (_, Some(v)) => asg.arities.get(v).map_or(true, |&x| x == st.ar),
                    _ => false,
                };
                let cod_ok = match (scheme.cod.as_const(), scheme.cod.as_var()) {
                    (Some(k), _) => k == st.coar,
                    (_, Some(v)) => asg.arities.get(v).map_or(true, |&x| x == st.coar),
                    _ => false,
                };
                dom_ok && cod_ok
            })
            .map(|(n, st)| (n, *st))
            .collect();
        if candidates.is_empty() {
            return Ok(None);
        }
        let (name, st) = candidates[rng.gen_range(0..candidates.len())];
        asg.rels.insert(ph.clone(), name.clone());
        if let Some(v) = scheme.dom.as_var() {
            asg.arities.entry(v.to_string()).or_insert(st.ar);
        }
        if let Some(v) = scheme.cod.as_var() {
            asg.arities.entry(v.to_string()).or_insert(st.coar);
        }
    }
    for v in &vars {
        asg.arities
            .entry(v.clone())
            .or_insert_with(|| rng.gen_range(0..=2u32));
    }
    for (mv, scheme) in &schema.vars.metas {
        let dom = scheme.dom.eval(&asg.arities)?;
        let cod = scheme.cod.eval(&asg.arities)?;
        asg.terms
            .insert(mv.clone(), random_term(rng, sig, dom, cod, 3));
    }
    let lhs = instantiate(&schema.lhs, &asg)?;
    let rhs = instantiate(&schema.rhs, &asg)?;
    Ok(Some((lhs, rhs)))
}

/// A small signature with `count` symbols of arity+coarity <= 2.
pub fn small_signature(count: usize) -> Signature {
    let shapes = [(1, 1), (2, 0), (0, 1), (1, 0), (0, 2), (2, 0)];
    let mut sig = Signature::new();
    for (i, &(a, c)) in shapes.iter().take(count).enumerate() {
        let name = format!("G{i}");
        sig.insert(&name, a, c);
    }
    sig
}

/// A random CR expression over binary symbols of the signature.
pub fn random_cr<R: Rng>(rng: &mut R, symbols: &[String], depth: u32) -> crate::bridges::cr::CRExpr {
    use crate::bridges::cr::CRExpr::*;
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..5u8) {
            0 => IdW,
            1 => IdB,
            2 => Top,
            3 => Bot,
            _ => Sym(symbols[rng.gen_range(0..symbols.len())].clone()),
        };
    }
    match rng.gen_range(0..6u8) {
        0 => SeqW(
            Box::new(random_cr(rng, symbols, depth - 1)),
            Box::new(random_cr(rng, symbols, depth - 1)),
        ),
        1 => SeqB(
            Box::new(random_cr(rng, symbols, depth - 1)),
            Box::new(random_cr(rng, symbols, depth - 1)),
        ),
        2 => Cap(
            Box::new(random_cr(rng, symbols, depth - 1)),
            Box::new(random_cr(rng, symbols, depth - 1)),
        ),
        3 => Cup(
            Box::new(random_cr(rng, symbols, depth - 1)),
            Box::new(random_cr(rng, symbols, depth - 1)),
        ),
        4 => Op(Box::new(random_cr(rng, symbols, depth - 1))),
        _ => Neg(Box::new(random_cr(rng, symbols, depth - 1))),
    }
}

/// A random FOL formula in context `n` over the signature's predicate symbols
/// (coarity 0) and function symbols (coarity 1).
pub fn random_fol<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    n: u32,
    depth: u32,
) -> crate::bridges::fol::Formula {
    use crate::bridges::fol::Formula::*;
    if depth == 0 || rng.gen_bool(0.2) {
        // atom: relation over terms, equality, or a constant formula
        let preds: Vec<(&String, u32)> = sig
            .symbols
            .iter()
            .filter(|(_, st)| st.coar == 0)
            .map(|(name, st)| (name, st.ar))
            .collect();
        if !preds.is_empty() && rng.gen_bool(0.6) && n > 0 {
            let (name, ar) = preds[rng.gen_range(0..preds.len())];
            let args = (0..ar).map(|_| random_fol_term(rng, sig, n, 1)).collect();
            return Rel(name.clone(), args);
        }
        if n > 0 && rng.gen_bool(0.5) {
            return Eq(
                random_fol_term(rng, sig, n, 1),
                random_fol_term(rng, sig, n, 1),
            );
        }
        return if rng.gen_bool(0.5) { Top } else { Bot };
    }
    match rng.gen_range(0..6u8) {
        0 => And(
            Box::new(random_fol(rng, sig, n, depth - 1)),
            Box::new(random_fol(rng, sig, n, depth - 1)),
        ),
        1 => Or(
            Box::new(random_fol(rng, sig, n, depth - 1)),
            Box::new(random_fol(rng, sig, n, depth - 1)),
        ),
        2 => Not(Box::new(random_fol(rng, sig, n, depth - 1))),
        3 => Exists(Box::new(random_fol(rng, sig, n + 1, depth - 1))),
        4 => Forall(Box::new(random_fol(rng, sig, n + 1, depth - 1))),
        _ => random_fol(rng, sig, n, 0),
    }
}

pub fn random_fol_term<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    n: u32,
    depth: u32,
) -> crate::bridges::fol::FolTerm {
    use crate::bridges::fol::FolTerm::*;
    let funs: Vec<(&String, u32)> = sig
        .symbols
        .iter()
        .filter(|(_, st)| st.coar == 1)
        .map(|(name, st)| (name, st.ar))
        .collect();
    if n == 0 || (depth > 0 && !funs.is_empty() && rng.gen_bool(0.4)) {
        if let Some((name, ar)) = funs.get(rng.gen_range(0..funs.len().max(1))) {
            let args = (0..*ar)
                .map(|_| random_fol_term(rng, sig, n, depth.saturating_sub(1)))
                .collect();
            return App((*name).clone(), args);
        }
    }
    Var(rng.gen_range(1..=n.max(1)))
}
