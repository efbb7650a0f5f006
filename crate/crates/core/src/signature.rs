use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Arity and coarity of a relation symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolType {
    pub ar: u32,
    pub coar: u32,
}

/// A monoidal signature: relation symbols with arity and coarity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub symbols: BTreeMap<String, SymbolType>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn with(mut self, name: &str, ar: u32, coar: u32) -> Self {
        self.symbols.insert(name.to_string(), SymbolType { ar, coar });
        self
    }

    pub fn insert(&mut self, name: &str, ar: u32, coar: u32) {
        self.symbols.insert(name.to_string(), SymbolType { ar, coar });
    }

    pub fn get(&self, name: &str) -> Result<SymbolType> {
        self.symbols
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Signature> {
        serde_json::from_str(text).map_err(|e| Error::Io(format!("signature file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("signature serializes")
    }
}
