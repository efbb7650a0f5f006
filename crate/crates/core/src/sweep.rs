//! Soundness sweep: every directed rule of a catalog, instantiated with
//! random metavariable terms, must satisfy semantic inclusion on all small
//! interpretations. This is the fuzzing backend of the CLI and the first
//! acceptance criterion.

use crate::catalog::{RuleCatalog, RuleKind};
use crate::error::Result;
use crate::gen::random_schema_instance;
use crate::normalize::normalize;
use crate::oracle::for_each_interpretation;
use crate::print::render;
use crate::rel::semantic_includes;
use crate::signature::Signature;
use crate::term::Term;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub rule: String,
    pub direction: String,
    pub lhs: String,
    pub rhs: String,
    pub domain_size: u8,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rules: usize,
    pub directed_rules: usize,
    pub instances_per_rule: usize,
    pub max_size: u8,
    pub violations: Vec<Violation>,
}

/// Check one directed instance against every interpretation with domain size
/// `0..=max_size`; returns the first violating size.
fn check_instance(
    lhs: &Term,
    rhs: &Term,
    sig: &Signature,
    max_size: u8,
    budget: u64,
) -> Result<Option<u8>> {
    for size in 0..=max_size {
        let mut bad = false;
        for_each_interpretation(sig, size, budget, 11, |interp| {
            if !semantic_includes(lhs, rhs, interp)? {
                bad = true;
                return Ok(true);
            }
            Ok(false)
        })?;
        if bad {
            return Ok(Some(size));
        }
    }
    Ok(None)
}

/// Sweep the whole catalog. Deterministic under the seed.
pub fn soundness_sweep(
    cat: &RuleCatalog,
    sig: &Signature,
    instances: usize,
    max_size: u8,
    seed: u64,
    budget: u64,
) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut directed = 0usize;
    for schema in cat.iter() {
        for _ in 0..instances {
            let Some((lhs, rhs)) = random_schema_instance(&mut rng, schema, sig)? else {
                continue;
            };
            let dirs: &[(&Term, &Term, &str)] = match schema.kind {
                RuleKind::Leq => &[(&lhs, &rhs, "fwd")],
                RuleKind::Eq => &[(&lhs, &rhs, "fwd"), (&rhs, &lhs, "bwd")],
            };
            for (l, r, d) in dirs {
                if let Some(size) = check_instance(l, r, sig, max_size, budget)? {
                    violations.push(Violation {
                        rule: schema.name.clone(),
                        direction: d.to_string(),
                        lhs: render(&normalize(&l.desugar())),
                        rhs: render(&normalize(&r.desugar())),
                        domain_size: size,
                    });
                }
            }
        }
        directed += match schema.kind {
            RuleKind::Leq => 1,
            RuleKind::Eq => 2,
        };
    }
    Ok(SweepReport {
        rules: cat.len(),
        directed_rules: directed,
        instances_per_rule: instances,
        max_size,
        violations,
    })
}
