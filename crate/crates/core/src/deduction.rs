//! The constructive deduction transform: a proof of `a ⊑ b` over the theory
//! extended with a closed axiom `(e+, c)` becomes a proof of
//! `c *+ id+@n ⊑ b ;- alpha(a)` over the base theory.
//!
//! The translation works step by step on the linear derivation. A step that
//! uses a catalog rule or base-theory axiom is wrapped into the residual
//! context: weaken the spare `c` away (`dc+.nat`), open the residual with the
//! linear-adjunction rule, and replay the step inside it. A step that uses
//! the added axiom keeps the spare `c`, opens the residual around the
//! previous term, and transports the `c` down to the rewrite position with
//! interchange and linear-strength moves. Consecutive steps are composed by
//! duplicating `c` (`cp+.nat`) and collapsing the two residuals through
//! linear distributivity and the adjunction counit.
//!
//! The two adjunction schemas (`lin.adj.tau`, `lin.adj.gamma`) are derived
//! rules registered with oracle justification; check reports flag them.

use crate::catalog::{AxiomSchema, Provenance, RuleCatalog, RuleKind};
use crate::derived::alpha;
use crate::error::{Error, Result};
use crate::path::Path;
use crate::pattern::{ArityExpr, Assignment, Pat, PatType, SchemaVars};
use crate::proof::{
    apply_step, register_derived_rule, DerivedRule, Direction, Justification, Proof, Step,
};
use crate::term::{Color, GenKind, SugarFam, Term};
use crate::theory::Theory;
use crate::ty::typecheck;

pub const TAU_RULE: &str = "lin.adj.tau";
pub const GAMMA_RULE: &str = "lin.adj.gamma";

fn adjunction_schema(name: &str, lhs: &str, rhs: &str) -> AxiomSchema {
    let mut vars = SchemaVars::default();
    vars.metas.insert(
        "$a".into(),
        PatType {
            dom: ArityExpr::var("n"),
            cod: ArityExpr::var("m"),
        },
    );
    AxiomSchema {
        name: name.into(),
        kind: RuleKind::Leq,
        lhs: Pat::parse(lhs).expect("adjunction pattern"),
        rhs: Pat::parse(rhs).expect("adjunction pattern"),
        vars,
        provenance: Provenance::Base,
    }
}

/// The linear adjunction as two derived-rule schemas:
/// `id+@n ⊑ $a ;- alpha($a)` and `alpha($a) ;+ $a ⊑ id-@m`.
pub fn adjunction_rules() -> [DerivedRule; 2] {
    [
        DerivedRule {
            schema: adjunction_schema(TAU_RULE, "id+@n", "$a ;- alpha($a)"),
            justification: Justification::OracleValidated { max_size: 2 },
        },
        DerivedRule {
            schema: adjunction_schema(GAMMA_RULE, "alpha($a) ;+ $a", "id-@m"),
            justification: Justification::OracleValidated { max_size: 2 },
        },
    ]
}

/// Extend a catalog with the adjunction rules (validating them against the
/// oracle once).
pub fn catalog_with_adjunction(cat: &RuleCatalog, theory: &Theory) -> Result<RuleCatalog> {
    let mut out = cat.clone();
    for rule in adjunction_rules() {
        if !out.contains(&rule.schema.name) {
            out = register_derived_rule(rule, &out, theory)?;
        }
    }
    Ok(out)
}

fn id_term(c: Color, n: u32) -> Term {
    Term::sugar(SugarFam::IdN, c, n, None)
}

fn e(c: Color) -> Term {
    Term::Gen(GenKind::Id0, c)
}

/// Step emitter that replays everything it emits, so paths always refer to
/// the literal trees the checker will see.
struct Emit<'a> {
    cur: Term,
    steps: Vec<Step>,
    cat: &'a RuleCatalog,
    theory: &'a Theory,
}

impl<'a> Emit<'a> {
    fn new(start: Term, cat: &'a RuleCatalog, theory: &'a Theory) -> Self {
        Emit {
            cur: start.desugar(),
            steps: Vec::new(),
            cat,
            theory,
        }
    }

    fn push(&mut self, rule: &str, dir: Direction, path: Path, subst: Assignment) -> Result<()> {
        let step = Step {
            rule: rule.into(),
            direction: dir,
            path,
            subst,
        };
        self.cur = apply_step(&self.cur, &step, self.cat, self.theory)?;
        self.steps.push(step);
        Ok(())
    }

    /// Replay an already-built step list with a path prefix. The subtree at
    /// the prefix must be the literal start tree those steps assume.
    fn embed(&mut self, prefix: &Path, steps: &[Step]) -> Result<()> {
        for s in steps {
            let step = Step {
                rule: s.rule.clone(),
                direction: s.direction,
                path: prefix.join(&s.path),
                subst: s.subst.clone(),
            };
            self.cur = apply_step(&self.cur, &step, self.cat, self.theory)?;
            self.steps.push(step);
        }
        Ok(())
    }
}

fn terms(pairs: Vec<(&str, Term)>) -> Assignment {
    let mut asg = Assignment::default();
    for (k, v) in pairs {
        asg.terms.insert(k.to_string(), v);
    }
    asg
}

fn with_arity(mut asg: Assignment, pairs: Vec<(&str, u32)>) -> Assignment {
    for (k, v) in pairs {
        asg.arities.insert(k.to_string(), v);
    }
    asg
}

/// Transform a proof over `base + (e+, c)` (the added axiom named
/// `added_name`) into a proof over `base` with endpoints
/// `c *+ id+@n ⊑ b ;- alpha(a)`. The returned proof checks against a catalog
/// extended with the adjunction rules (see [`catalog_with_adjunction`]).
pub fn deduction_transform(
    p: &Proof,
    base: &Theory,
    c: &Term,
    added_name: &str,
    cat: &RuleCatalog,
) -> Result<Proof> {
    let cty = typecheck(c, &base.sig)?;
    if (cty.dom, cty.cod) != (0, 0) {
        return Err(Error::NotClosedFormula(cty.to_string()));
    }
    let extended = base.extended_with_scalar(added_name, c)?;
    let adj_cat = catalog_with_adjunction(cat, base)?;

    // replay the original proof over the extended theory, recording trees
    let mut trees = vec![p.start.desugar()];
    for (index, s) in p.steps.iter().enumerate() {
        let next = apply_step(trees.last().unwrap(), s, &adj_cat, &extended).map_err(|e| {
            Error::Step {
                index,
                source: Box::new(e),
            }
        })?;
        trees.push(next);
    }
    let t0 = trees[0].clone();
    let ty = typecheck(&t0, &base.sig)?;
    let n = ty.dom;
    let cd = c.desugar();
    let start_tree = Term::tensor(Color::White, cd.clone(), id_term(Color::White, n).desugar());

    // k = 0: weaken c away and open the residual once
    if p.steps.is_empty() {
        let mut em = Emit::new(start_tree.clone(), &adj_cat, base);
        weaken_then_tau(&mut em, &cd, &t0, n)?;
        return Ok(finish(em, c, n, &t0, trees.last().unwrap()));
    }

    // block for each original step, then stitch left to right
    let mut acc: Option<(Vec<Step>, Term)> = None;
    for (i, s) in p.steps.iter().enumerate() {
        let prev = &trees[i];
        let next = &trees[i + 1];
        let block = if s.rule == added_name {
            added_axiom_block(&start_tree, &cd, prev, s, n, &adj_cat, base)?
        } else {
            plain_block(&start_tree, &cd, prev, s, n, &adj_cat, base)?
        };
        acc = Some(match acc {
            None => block,
            Some(q) => stitch(&start_tree, &cd, n, q, block, &t0, prev, next, &adj_cat, base)?,
        });
    }
    let (steps, _end) = acc.unwrap();
    let mut em = Emit::new(start_tree, &adj_cat, base);
    em.embed(&Path::root(), &steps)?;
    Ok(finish(em, c, n, &t0, trees.last().unwrap()))
}

fn finish(em: Emit<'_>, c: &Term, n: u32, a: &Term, b: &Term) -> Proof {
    Proof {
        start: Term::tensor(Color::White, c.clone(), id_term(Color::White, n)),
        steps: em.steps,
        claim_end: Some(Term::seq(Color::Black, b.clone(), alpha(&a.desugar()))),
    }
}

/// `c *+ id_n  ->  e+ *+ id_n  ->  prev ;- alpha(prev)`.
fn weaken_then_tau(em: &mut Emit<'_>, cd: &Term, prev: &Term, _n: u32) -> Result<()> {
    em.push(
        "dc+.nat",
        Direction::Fwd,
        Path(vec![0]),
        terms(vec![("$a", cd.clone())]),
    )?;
    em.push(
        TAU_RULE,
        Direction::Fwd,
        Path::root(),
        terms(vec![("$a", prev.clone())]),
    )?;
    Ok(())
}

/// Block for a step that does not use the added axiom:
/// weaken, open the residual at `prev`, replay the step inside.
fn plain_block(
    start: &Term,
    cd: &Term,
    prev: &Term,
    s: &Step,
    n: u32,
    cat: &RuleCatalog,
    base: &Theory,
) -> Result<(Vec<Step>, Term)> {
    let mut em = Emit::new(start.clone(), cat, base);
    weaken_then_tau(&mut em, cd, prev, n)?;
    let mut inner = Path(vec![0]);
    inner.0.extend_from_slice(&s.path.0);
    em.push(&s.rule, s.direction, inner, s.subst.clone())?;
    Ok((em.steps, em.cur))
}

/// Block for a step that rewrites the added axiom `e+ -> c` at `s.path`:
/// keep the spare `c`, open the residual, and transport `c` to the hole.
fn added_axiom_block(
    start: &Term,
    cd: &Term,
    prev: &Term,
    s: &Step,
    n: u32,
    cat: &RuleCatalog,
    base: &Theory,
) -> Result<(Vec<Step>, Term)> {
    let w = Color::White;
    let mut em = Emit::new(start.clone(), cat, base);
    // c *+ id_n  ->  (c *+ id_n) ;+ (e+ *+ id_n)
    em.push(
        "smc.interchange+",
        Direction::Bwd,
        Path::root(),
        terms(vec![
            ("$a", cd.clone()),
            ("$b", id_term(w, n)),
            ("$c", e(w)),
            ("$d", id_term(w, n)),
        ]),
    )?;
    // open the residual in the trailing identity
    em.push(
        TAU_RULE,
        Direction::Fwd,
        Path(vec![1]),
        terms(vec![("$a", prev.clone())]),
    )?;
    // (c *+ id_n) ;+ X  ->  c *+ X
    let residual = Term::seq(Color::Black, prev.clone(), alpha(prev));
    em.push(
        "smc.interchange+",
        Direction::Fwd,
        Path::root(),
        terms(vec![
            ("$a", cd.clone()),
            ("$b", id_term(w, n)),
            ("$c", e(w)),
            ("$d", residual),
        ]),
    )?;
    // c *+ (prev ;- alpha(prev))  ->  (c *+ prev) ;- alpha(prev)
    em.push(
        "nu.o.l",
        Direction::Fwd,
        Path::root(),
        terms(vec![
            ("$a", cd.clone()),
            ("$b", e(Color::Black)),
            ("$c", prev.clone()),
            ("$d", alpha(prev)),
        ]),
    )?;
    // transport c down to the hole inside prev
    transport(&mut em, Path(vec![0]), cd, prev, &s.path.0, base)?;
    Ok((em.steps, em.cur))
}

/// Move the scalar `c` from the front of the subtree at `state` (which is
/// `≈ c *+ sub`) down along `pi` inside `sub`. Each crossing keeps the
/// invariant: the state subtree has children `[0] ≈ c` and `[1] ≈ <child>`.
fn transport(
    em: &mut Emit<'_>,
    state: Path,
    cd: &Term,
    sub: &Term,
    pi: &[u8],
    base: &Theory,
) -> Result<()> {
    let Some((&i, rest)) = pi.split_first() else {
        return Ok(()); // arrived: c *+ hole ≈ c
    };
    let w = Color::White;
    let b = Color::Black;
    let (l, r) = match sub {
        Term::Seq(_, l, r) | Term::Tensor(_, l, r) => ((**l).clone(), (**r).clone()),
        _ => {
            return Err(Error::InvalidPath {
                path: Path(pi.to_vec()),
            })
        }
    };
    let tl = typecheck(&l, &base.sig)?;
    let tr = typecheck(&r, &base.sig)?;
    let next_state = match sub {
        Term::Seq(Color::White, ..) => {
            if i == 0 {
                em.push(
                    "smc.interchange+",
                    Direction::Bwd,
                    state.clone(),
                    terms(vec![
                        ("$a", cd.clone()),
                        ("$b", l.clone()),
                        ("$c", e(w)),
                        ("$d", r.clone()),
                    ]),
                )?;
                state.child(0)
            } else {
                em.push(
                    "smc.interchange+",
                    Direction::Bwd,
                    state.clone(),
                    terms(vec![
                        ("$a", e(w)),
                        ("$b", l.clone()),
                        ("$c", cd.clone()),
                        ("$d", r.clone()),
                    ]),
                )?;
                state.child(1)
            }
        }
        Term::Seq(Color::Black, ..) => {
            if i == 0 {
                em.push(
                    "nu.o.l",
                    Direction::Fwd,
                    state.clone(),
                    terms(vec![
                        ("$a", cd.clone()),
                        ("$b", e(b)),
                        ("$c", l.clone()),
                        ("$d", r.clone()),
                    ]),
                )?;
                state.child(0)
            } else {
                let m = tr.cod;
                em.push(
                    "smc.interchange+",
                    Direction::Bwd,
                    state.clone(),
                    terms(vec![
                        ("$a", e(w)),
                        ("$b", sub.clone()),
                        ("$c", cd.clone()),
                        ("$d", id_term(w, m)),
                    ]),
                )?;
                em.push(
                    "delta.r",
                    Direction::Fwd,
                    state.clone(),
                    terms(vec![
                        ("$a", l.clone()),
                        ("$b", r.clone()),
                        ("$c", Term::tensor(w, cd.clone(), id_term(w, m))),
                    ]),
                )?;
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.child(1),
                    terms(vec![
                        ("$a", e(w)),
                        ("$b", r.clone()),
                        ("$c", cd.clone()),
                        ("$d", id_term(w, m)),
                    ]),
                )?;
                state.child(1)
            }
        }
        Term::Tensor(Color::White, ..) => {
            if i == 0 {
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.clone(),
                    terms(vec![
                        ("$a", Term::tensor(w, cd.clone(), l.clone())),
                        ("$b", r.clone()),
                        ("$c", id_term(w, tl.cod)),
                        ("$d", id_term(w, tr.cod)),
                    ]),
                )?;
                state.child(0).child(0)
            } else {
                // split the spare identities, commute c past the left block,
                // then regroup it with the right factor
                em.push(
                    "smc.interchange+",
                    Direction::Bwd,
                    state.clone(),
                    terms(vec![
                        ("$a", cd.clone()),
                        ("$b", id_term(w, tl.dom + tr.dom)),
                        ("$c", e(w)),
                        ("$d", sub.clone()),
                    ]),
                )?;
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.child(0),
                    terms(vec![
                        ("$a", Term::tensor(w, cd.clone(), id_term(w, tl.dom))),
                        ("$b", id_term(w, tr.dom)),
                        ("$c", id_term(w, tl.dom)),
                        ("$d", id_term(w, tr.dom)),
                    ]),
                )?;
                em.push(
                    "smc.sym.nat+",
                    Direction::Fwd,
                    state.child(0).child(0),
                    with_arity(terms(vec![("$a", cd.clone())]), vec![("o", tl.dom)]),
                )?;
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.clone(),
                    terms(vec![
                        ("$a", id_term(w, tl.dom)),
                        ("$b", Term::tensor(w, cd.clone(), id_term(w, tr.dom))),
                        ("$c", l.clone()),
                        ("$d", r.clone()),
                    ]),
                )?;
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.child(1),
                    terms(vec![
                        ("$a", cd.clone()),
                        ("$b", id_term(w, tr.dom)),
                        ("$c", e(w)),
                        ("$d", r.clone()),
                    ]),
                )?;
                state.child(1)
            }
        }
        Term::Tensor(Color::Black, ..) => {
            em.push(
                "smc.interchange+",
                Direction::Bwd,
                state.clone(),
                terms(vec![
                    ("$a", cd.clone()),
                    ("$b", id_term(w, tl.dom + tr.dom)),
                    ("$c", e(w)),
                    ("$d", sub.clone()),
                ]),
            )?;
            if i == 0 {
                em.push(
                    "nu.b.r",
                    Direction::Fwd,
                    state.clone(),
                    terms(vec![
                        ("$a", Term::tensor(w, cd.clone(), id_term(w, tl.dom))),
                        ("$c", id_term(w, tr.dom)),
                        ("$b", l.clone()),
                        ("$d", r.clone()),
                    ]),
                )?;
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.child(0),
                    terms(vec![
                        ("$a", cd.clone()),
                        ("$b", id_term(w, tl.dom)),
                        ("$c", e(w)),
                        ("$d", l.clone()),
                    ]),
                )?;
                state.child(0)
            } else {
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.child(0),
                    terms(vec![
                        ("$a", Term::tensor(w, cd.clone(), id_term(w, tl.dom))),
                        ("$b", id_term(w, tr.dom)),
                        ("$c", id_term(w, tl.dom)),
                        ("$d", id_term(w, tr.dom)),
                    ]),
                )?;
                em.push(
                    "smc.sym.nat+",
                    Direction::Fwd,
                    state.child(0).child(0),
                    with_arity(terms(vec![("$a", cd.clone())]), vec![("o", tl.dom)]),
                )?;
                em.push(
                    "nu.b.r",
                    Direction::Fwd,
                    state.clone(),
                    terms(vec![
                        ("$a", id_term(w, tl.dom)),
                        ("$c", Term::tensor(w, cd.clone(), id_term(w, tr.dom))),
                        ("$b", l.clone()),
                        ("$d", r.clone()),
                    ]),
                )?;
                em.push(
                    "smc.interchange+",
                    Direction::Fwd,
                    state.child(1),
                    terms(vec![
                        ("$a", cd.clone()),
                        ("$b", id_term(w, tr.dom)),
                        ("$c", e(w)),
                        ("$d", r.clone()),
                    ]),
                )?;
                state.child(1)
            }
        }
        _ => unreachable!(),
    };
    let child = if i == 0 { l } else { r };
    transport(em, next_state, cd, &child, rest, base)
}

/// Compose an accumulated proof `c *+ id_n ⊑ prev ;- alpha(t0)` with a block
/// `c *+ id_n ⊑ next ;- alpha(prev)` into `c *+ id_n ⊑ next ;- alpha(t0)`.
#[allow(clippy::too_many_arguments)]
fn stitch(
    start: &Term,
    cd: &Term,
    n: u32,
    q: (Vec<Step>, Term),
    r: (Vec<Step>, Term),
    t0: &Term,
    prev: &Term,
    next: &Term,
    cat: &RuleCatalog,
    base: &Theory,
) -> Result<(Vec<Step>, Term)> {
    let w = Color::White;
    let mut em = Emit::new(start.clone(), cat, base);
    // duplicate the scalar
    em.push(
        "cp+.nat",
        Direction::Fwd,
        Path(vec![0]),
        terms(vec![("$a", cd.clone())]),
    )?;
    // regroup: (c *+ id_n) appears twice, sequenced
    em.push(
        "smc.interchange+",
        Direction::Bwd,
        Path::root(),
        terms(vec![
            ("$a", e(w)),
            ("$b", Term::tensor(w, cd.clone(), id_term(w, n))),
            ("$c", cd.clone()),
            ("$d", id_term(w, n)),
        ]),
    )?;
    // the later block first, the accumulated proof second
    em.embed(&Path(vec![0, 1]), &r.0)?;
    em.embed(&Path(vec![1]), &q.0)?;
    // (next ;- alpha(prev)) ;+ (prev ;- alpha(t0))
    //   -> next ;- (alpha(prev) ;+ (prev ;- alpha(t0)))
    em.push(
        "delta.r",
        Direction::Fwd,
        Path::root(),
        terms(vec![
            ("$a", next.clone()),
            ("$b", alpha(prev)),
            ("$c", Term::seq(Color::Black, prev.clone(), alpha(&t0.desugar()))),
        ]),
    )?;
    //   -> next ;- ((alpha(prev) ;+ prev) ;- alpha(t0))
    em.push(
        "delta.l",
        Direction::Fwd,
        Path(vec![1]),
        terms(vec![
            ("$a", alpha(prev)),
            ("$b", prev.clone()),
            ("$c", alpha(&t0.desugar())),
        ]),
    )?;
    //   -> next ;- (id-@m ;- alpha(t0))
    em.push(
        GAMMA_RULE,
        Direction::Fwd,
        Path(vec![1, 0]),
        terms(vec![("$a", prev.clone())]),
    )?;
    Ok((em.steps, em.cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::normalize::struct_eq;
    use crate::parse::parse;
    use crate::proof::check_proof;
    use crate::signature::Signature;

    fn base() -> Theory {
        let mut th = Theory::new(Signature::new().with("R", 1, 1).with("S", 1, 1));
        th.push_axiom("rs", parse("R^o").unwrap(), parse("S^o").unwrap())
            .unwrap();
        th
    }

    fn run(p: &Proof, c: &Term) -> Proof {
        let cat = catalog();
        let base = base();
        let out = deduction_transform(p, &base, c, "added", &cat).unwrap();
        let adj = catalog_with_adjunction(&cat, &base).unwrap();
        let (seq, _) = check_proof(&out, &adj, &base).unwrap();
        assert!(struct_eq(&seq.rhs, out.claim_end.as_ref().unwrap()));
        out
    }

    #[test]
    fn empty_proof_transforms() {
        // endpoints a = b = R^o : c *+ id ⊑ R^o ;- alpha(R^o)
        let c = parse("S^o ;+ dc+").unwrap(); // wait: needs 0 -> 0
        let c = Term::seq(
            Color::White,
            Term::Gen(GenKind::Codiscard, Color::White),
            c,
        );
        let p = Proof {
            start: parse("R^o").unwrap(),
            steps: vec![],
            claim_end: None,
        };
        let out = run(&p, &c);
        assert!(struct_eq(
            out.claim_end.as_ref().unwrap(),
            &parse("R^o ;- R^b").unwrap()
        ));
    }

    #[test]
    fn single_added_axiom_at_root() {
        // p: e+ -> c by the added axiom at the root
        let c = parse("cd+ ;+ dc+").unwrap();
        let p = Proof {
            start: parse("e+").unwrap(),
            steps: vec![Step {
                rule: "added".into(),
                direction: Direction::Fwd,
                path: Path::root(),
                subst: Assignment::default(),
            }],
            claim_end: None,
        };
        let out = run(&p, &c);
        // endpoints: c *+ id+@0 ⊑ c ;- alpha(e+) = c ;- e-
        assert!(struct_eq(
            out.claim_end.as_ref().unwrap(),
            &Term::seq(Color::Black, c.clone(), e(Color::Black))
        ));
    }

    #[test]
    fn theory_step_then_added_axiom() {
        // start R^o *+ e+; apply rs at [0], then the added axiom at [1]
        let c = parse("cd+ ;+ dc+").unwrap();
        let p = Proof {
            start: parse("R^o *+ e+").unwrap(),
            steps: vec![
                Step {
                    rule: "rs".into(),
                    direction: Direction::Fwd,
                    path: Path(vec![0]),
                    subst: Assignment::default(),
                },
                Step {
                    rule: "added".into(),
                    direction: Direction::Fwd,
                    path: Path(vec![1]),
                    subst: Assignment::default(),
                },
            ],
            claim_end: None,
        };
        run(&p, &c);
    }

    #[test]
    fn added_axiom_under_black_composition() {
        let c = parse("cd+ ;+ dc+").unwrap();
        // start: R^b ;- (e+ ;+ S^o) ... e+ : 0 -> 0 tensored in the middle
        let start = parse("dc+ ;+ (e+ *+ cd+)").unwrap();
        let p = Proof {
            start,
            steps: vec![Step {
                rule: "added".into(),
                direction: Direction::Fwd,
                path: Path(vec![1, 0]),
                subst: Assignment::default(),
            }],
            claim_end: None,
        };
        run(&p, &c);
    }
}
