use crate::error::Result;
use crate::rel::{eval, Interpretation, Relation, Tuple};
use crate::signature::Signature;
use crate::term::Term;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of a bounded counterexample search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    HoldsUpTo { max_size: u8 },
    Counterexample {
        domain_size: u8,
        interp: Vec<(String, Vec<(Tuple, Tuple)>)>,
        witness: (Tuple, Tuple),
    },
}

/// Number of candidate tables for one symbol at the given domain size, or
/// `None` on overflow.
fn table_count(size: u8, ar: u32, coar: u32) -> Option<u128> {
    let cells = (size as u128).checked_pow(ar + coar)?;
    if cells > 30 {
        return None; // 2^cells would dwarf any budget
    }
    Some(1u128 << cells)
}

/// All cells of a table for a symbol, in canonical order.
fn cells(size: u8, ar: u32, coar: u32) -> Vec<(Tuple, Tuple)> {
    let mut out = Vec::new();
    for x in Relation::tuples(size, ar) {
        for y in Relation::tuples(size, coar) {
            out.push((x.clone(), y));
        }
    }
    out
}

fn table_from_bits(cells: &[(Tuple, Tuple)], bits: u128, ar: u32, coar: u32) -> Relation {
    let mut rel = Relation::empty(ar, coar);
    for (i, cell) in cells.iter().enumerate() {
        if bits >> i & 1 == 1 {
            rel.pairs.insert(cell.clone());
        }
    }
    rel
}

/// Visit interpretations of `sig` at a fixed domain size. When the full table
/// space fits in `budget`, every interpretation is visited in canonical
/// order; otherwise `budget` tables are sampled from the seeded generator.
/// The visitor returns `true` to stop early.
pub fn for_each_interpretation<F>(
    sig: &Signature,
    size: u8,
    budget: u64,
    seed: u64,
    mut visit: F,
) -> Result<bool>
where
    F: FnMut(&Interpretation) -> Result<bool>,
{
    let syms: Vec<(&String, u32, u32)> = sig
        .symbols
        .iter()
        .map(|(n, t)| (n, t.ar, t.coar))
        .collect();
    let mut total: u128 = 1;
    let mut exhaustive = true;
    for &(_, ar, coar) in &syms {
        match table_count(size, ar, coar).and_then(|c| total.checked_mul(c)) {
            Some(t) if t <= budget as u128 => total = t,
            _ => {
                exhaustive = false;
                break;
            }
        }
    }
    let all_cells: Vec<Vec<(Tuple, Tuple)>> = syms
        .iter()
        .map(|&(_, ar, coar)| cells(size, ar, coar))
        .collect();

    if exhaustive {
        let mut counters = vec![0u128; syms.len()];
        loop {
            let mut interp = Interpretation::new(size);
            for (i, &(name, ar, coar)) in syms.iter().enumerate() {
                interp
                    .rho
                    .insert(name.clone(), table_from_bits(&all_cells[i], counters[i], ar, coar));
            }
            if visit(&interp)? {
                return Ok(true);
            }
            // odometer over the table spaces
            let mut i = 0;
            loop {
                if i == syms.len() {
                    return Ok(false);
                }
                let limit = table_count(size, syms[i].1, syms[i].2).unwrap();
                counters[i] += 1;
                if counters[i] < limit {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
            if syms.is_empty() {
                return Ok(false);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (size as u64).wrapping_mul(0x9e3779b9));
        for _ in 0..budget {
            let mut interp = Interpretation::new(size);
            for (i, &(name, ar, coar)) in syms.iter().enumerate() {
                let mut rel = Relation::empty(ar, coar);
                for cell in &all_cells[i] {
                    if rng.gen_bool(0.5) {
                        rel.pairs.insert(cell.clone());
                    }
                }
                interp.rho.insert(name.clone(), rel);
            }
            if visit(&interp)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0xB1C0;

/// Search all interpretations with domain size `0..=max_size` for a violation
/// of `eval(c) ⊆ eval(d)`. Exhaustive whenever the table space fits in the
/// budget, else reproducible sampling; the first counterexample in canonical
/// enumeration order is reported.
pub fn bounded_counterexample(
    c: &Term,
    d: &Term,
    sig: &Signature,
    max_size: u8,
    budget: u64,
    seed: u64,
) -> Result<Verdict> {
    let mut found: Option<(Interpretation, (Tuple, Tuple))> = None;
    for size in 0..=max_size {
        for_each_interpretation(sig, size, budget, seed, |interp| {
            let rc = eval(c, interp)?;
            let rd = eval(d, interp)?;
            if let Some(w) = rc.pairs.difference(&rd.pairs).next() {
                found = Some((interp.clone(), w.clone()));
                return Ok(true);
            }
            Ok(false)
        })?;
        if let Some((interp, witness)) = found {
            return Ok(Verdict::Counterexample {
                domain_size: size,
                interp: interp
                    .rho
                    .iter()
                    .map(|(k, v)| (k.clone(), v.pairs.iter().cloned().collect()))
                    .collect(),
                witness,
            });
        }
    }
    Ok(Verdict::HoldsUpTo { max_size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn truth_not_below_falsity() {
        let sig = Signature::new();
        let v = bounded_counterexample(
            &parse("e+").unwrap(),
            &parse("e-").unwrap(),
            &sig,
            0,
            DEFAULT_BUDGET,
            DEFAULT_SEED,
        )
        .unwrap();
        match v {
            Verdict::Counterexample { domain_size, witness, .. } => {
                assert_eq!(domain_size, 0);
                assert_eq!(witness, (vec![], vec![]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reflexive_inclusion_holds() {
        let sig = Signature::new().with("R", 1, 1);
        let v = bounded_counterexample(
            &parse("R^o").unwrap(),
            &parse("R^o").unwrap(),
            &sig,
            2,
            DEFAULT_BUDGET,
            DEFAULT_SEED,
        )
        .unwrap();
        assert_eq!(v, Verdict::HoldsUpTo { max_size: 2 });
    }
}
