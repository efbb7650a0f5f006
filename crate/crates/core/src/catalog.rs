use crate::error::{Error, Result};
use crate::pattern::{pat_typecheck, ArityExpr, Pat, PatType, SchemaVars};
use serde::Deserialize;
use std::collections::BTreeMap;

/// Directed or bidirectional rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Leq,
    Eq,
}

/// Where a rule comes from; reports flag anything that is not a base axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// A row of the base axiomatisation.
    Base,
    /// Structural congruence beyond assoc/unit (interchange, symmetry laws).
    Structural,
    /// Registered later, justified by a checked proof.
    DerivedByProof,
    /// Registered later, justified by exhaustive semantic search up to a bound.
    DerivedByOracle { max_size: u8 },
}

/// A named directed rewrite schema over metavariables.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSchema {
    pub name: String,
    pub kind: RuleKind,
    pub lhs: Pat,
    pub rhs: Pat,
    pub vars: SchemaVars,
    pub provenance: Provenance,
}

impl AxiomSchema {
    /// Both pattern sides must typecheck symbolically to the same interface.
    pub fn validate(&self) -> Result<()> {
        let lt = pat_typecheck(&self.lhs, &self.vars).map_err(|e| named(&self.name, e))?;
        let rt = pat_typecheck(&self.rhs, &self.vars).map_err(|e| named(&self.name, e))?;
        if lt != rt {
            return Err(Error::Manifest {
                rule: self.name.clone(),
                msg: format!(
                    "sides have different symbolic types: {}->{} vs {}->{}",
                    lt.dom, lt.cod, rt.dom, rt.cod
                ),
            });
        }
        // every declared metavariable must occur (guards against manifest typos)
        let mut used = Vec::new();
        self.lhs.metavars(&mut used);
        self.rhs.metavars(&mut used);
        for v in used {
            if !self.vars.metas.contains_key(&v) {
                return Err(Error::Manifest {
                    rule: self.name.clone(),
                    msg: format!("metavariable `{v}` has no meta entry"),
                });
            }
        }
        let mut rels = Vec::new();
        self.lhs.relvars(&mut rels);
        self.rhs.relvars(&mut rels);
        for v in rels {
            if !self.vars.rels.contains_key(&v) {
                return Err(Error::Manifest {
                    rule: self.name.clone(),
                    msg: format!("relation placeholder `{v}` has no meta entry"),
                });
            }
        }
        Ok(())
    }

    /// The photographic negative of a row: colours flipped on both sides and
    /// the inequality reversed.
    pub fn color_dual(&self, dual_name: &str) -> Result<AxiomSchema> {
        Ok(AxiomSchema {
            name: dual_name.to_string(),
            kind: self.kind,
            lhs: self.rhs.color_dual()?,
            rhs: self.lhs.color_dual()?,
            vars: self.vars.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

fn named(rule: &str, e: Error) -> Error {
    match e {
        Error::Manifest { rule: r, msg } if r.is_empty() => Error::Manifest {
            rule: rule.to_string(),
            msg,
        },
        other => other,
    }
}

/// The rule catalog: base axioms, structural rules, and registered derived
/// rules, in load order.
#[derive(Debug, Clone, Default)]
pub struct RuleCatalog {
    rules: BTreeMap<String, AxiomSchema>,
    order: Vec<String>,
}

impl RuleCatalog {
    pub fn get(&self, name: &str) -> Result<&AxiomSchema> {
        self.rules
            .get(name)
            .ok_or_else(|| Error::UnknownRule(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.rules.contains_key(name)
    }

    pub fn insert(&mut self, schema: AxiomSchema) -> Result<()> {
        schema.validate()?;
        if self.rules.contains_key(&schema.name) {
            return Err(Error::Manifest {
                rule: schema.name.clone(),
                msg: "duplicate rule name".into(),
            });
        }
        self.order.push(schema.name.clone());
        self.rules.insert(schema.name.clone(), schema);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &AxiomSchema> {
        self.order.iter().map(|n| &self.rules[n])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of rows of the base axiomatisation (excluding structural smc
    /// rules and registered derived rules).
    pub fn base_row_count(&self) -> usize {
        self.iter().filter(|r| r.provenance == Provenance::Base).count()
    }
}

#[derive(Deserialize)]
struct MetaEntry {
    #[serde(default)]
    dom: Option<String>,
    #[serde(default)]
    cod: Option<String>,
    #[serde(default)]
    ar: Option<String>,
    #[serde(default)]
    coar: Option<String>,
}

#[derive(Deserialize)]
struct Row {
    name: String,
    kind: String,
    lhs: String,
    rhs: String,
    #[serde(default)]
    meta: BTreeMap<String, MetaEntry>,
    #[serde(default)]
    dual: Option<String>,
    #[serde(default)]
    structural: bool,
}

fn parse_arity(name: &str, field: &str, text: &str) -> Result<ArityExpr> {
    let mut acc = ArityExpr::zero();
    for part in text.split('+') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Ok(k) = part.parse::<u32>() {
            acc = acc.plus_const(k);
        } else if part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            acc = acc.plus_var(part);
        } else {
            return Err(Error::Manifest {
                rule: name.into(),
                msg: format!("bad arity expression `{text}` in {field}"),
            });
        }
    }
    Ok(acc)
}

/// The default manifest, embedded at build time; `load_manifest` accepts the
/// same format from a file (see the `NEOPEIRCE_MANIFEST` override in the CLI).
pub const DEFAULT_MANIFEST: &str = include_str!("../assets/manifest.json");

pub fn load_manifest(text: &str) -> Result<RuleCatalog> {
    let rows: Vec<Row> =
        serde_json::from_str(text).map_err(|e| Error::Io(format!("manifest: {e}")))?;
    let mut cat = RuleCatalog::default();
    for row in rows {
        let kind = match row.kind.as_str() {
            "leq" => RuleKind::Leq,
            "eq" => RuleKind::Eq,
            other => {
                return Err(Error::Manifest {
                    rule: row.name.clone(),
                    msg: format!("unknown kind `{other}`"),
                })
            }
        };
        let mut vars = SchemaVars::default();
        for (key, entry) in &row.meta {
            if key.starts_with('$') {
                let (Some(dom), Some(cod)) = (&entry.dom, &entry.cod) else {
                    return Err(Error::Manifest {
                        rule: row.name.clone(),
                        msg: format!("meta entry `{key}` needs dom and cod"),
                    });
                };
                vars.metas.insert(
                    key.clone(),
                    PatType {
                        dom: parse_arity(&row.name, "dom", dom)?,
                        cod: parse_arity(&row.name, "cod", cod)?,
                    },
                );
            } else {
                let (Some(ar), Some(coar)) = (&entry.ar, &entry.coar) else {
                    return Err(Error::Manifest {
                        rule: row.name.clone(),
                        msg: format!("meta entry `{key}` needs ar and coar"),
                    });
                };
                vars.rels.insert(
                    key.clone(),
                    PatType {
                        dom: parse_arity(&row.name, "ar", ar)?,
                        cod: parse_arity(&row.name, "coar", coar)?,
                    },
                );
            }
        }
        let provenance = if row.structural {
            Provenance::Structural
        } else {
            Provenance::Base
        };
        let schema = AxiomSchema {
            name: row.name.clone(),
            kind,
            lhs: Pat::parse(&row.lhs).map_err(|e| Error::Manifest {
                rule: row.name.clone(),
                msg: format!("lhs: {e}"),
            })?,
            rhs: Pat::parse(&row.rhs).map_err(|e| Error::Manifest {
                rule: row.name.clone(),
                msg: format!("rhs: {e}"),
            })?,
            vars,
            provenance,
        };
        if let Some(dual_name) = &row.dual {
            let dual = schema.color_dual(dual_name)?;
            cat.insert(schema)?;
            cat.insert(dual)?;
        } else {
            cat.insert(schema)?;
        }
    }
    Ok(cat)
}

/// The full base catalog from the embedded manifest.
pub fn catalog() -> RuleCatalog {
    load_manifest(DEFAULT_MANIFEST).expect("embedded manifest is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::struct_eq;
    use crate::parse::parse;
    use crate::pattern::{instantiate, Assignment};

    #[test]
    fn embedded_manifest_loads_and_typechecks() {
        let cat = catalog();
        // 64 rows of the base axiomatisation (tallied against the appendix
        // figure during transcription) plus 6 structural smc rules.
        assert_eq!(cat.base_row_count(), 64);
        assert_eq!(cat.len(), 70);
    }

    #[test]
    fn eta_dc_schema_shape() {
        let cat = catalog();
        let r = cat.get("eta.dc+").unwrap();
        assert_eq!(r.kind, RuleKind::Leq);
        let asg = Assignment::default();
        let lhs = instantiate(&r.lhs, &asg).unwrap();
        let rhs = instantiate(&r.rhs, &asg).unwrap();
        assert!(struct_eq(&lhs, &parse("id+").unwrap()));
        assert!(struct_eq(&rhs, &parse("dc+ ;+ cd+").unwrap()));
    }

    #[test]
    fn delta_l_shape() {
        let cat = catalog();
        let r = cat.get("delta.l").unwrap();
        let mut asg = Assignment::default();
        for v in ["$a", "$b", "$c"] {
            asg.terms.insert(v.into(), parse("R^o").unwrap());
        }
        let lhs = instantiate(&r.lhs, &asg).unwrap();
        assert!(struct_eq(&lhs, &parse("R^o ;+ (R^o ;- R^o)").unwrap()));
    }

    #[test]
    fn duals_exist_and_flip() {
        let cat = catalog();
        for (w, b) in [
            ("cp+.assoc", "cp-.assoc"),
            ("eta.dc+", "eps.cd-"),
            ("tau.cp+", "gamma.cc+"),
            ("delta.l", "delta.r"),
            ("nu.o.l", "nu.b.l"),
            ("F.bw", "F.wb"),
            ("smc.interchange+", "smc.interchange-"),
        ] {
            assert!(cat.contains(w), "{w}");
            assert!(cat.contains(b), "{b}");
        }
        // the corrected eta.cc- row: id- *- id- <= cc- ;- cp-
        let r = cat.get("eta.cc-").unwrap();
        let asg = Assignment::default();
        let lhs = instantiate(&r.lhs, &asg).unwrap();
        let rhs = instantiate(&r.rhs, &asg).unwrap();
        assert!(struct_eq(&lhs, &parse("id- *- id-").unwrap()));
        assert!(struct_eq(&rhs, &parse("cc- ;- cp-").unwrap()));
    }
}
