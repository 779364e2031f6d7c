//! Finite traces: one integer or boolean value per symbol per instant.

use super::ast::Symbol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("symbol {name} has {got} values, trace over instants 0..={k} needs {}", k + 1)]
    WrongLength { name: Symbol, got: usize, k: usize },
}

/// Valuation of every symbol at every instant `0..=K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    k: usize,
    int_vars: BTreeMap<Symbol, Vec<i64>>,
    bool_vars: BTreeMap<Symbol, Vec<bool>>,
}

impl Trace {
    pub fn new(k: usize) -> Self {
        Trace {
            k,
            int_vars: BTreeMap::new(),
            bool_vars: BTreeMap::new(),
        }
    }

    /// Final instant K; the trace has K + 1 instants.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set_int(
        &mut self,
        name: impl Into<Symbol>,
        values: Vec<i64>,
    ) -> Result<(), TraceError> {
        let name = name.into();
        if values.len() != self.k + 1 {
            return Err(TraceError::WrongLength {
                name,
                got: values.len(),
                k: self.k,
            });
        }
        self.int_vars.insert(name, values);
        Ok(())
    }

    pub fn set_bool(
        &mut self,
        name: impl Into<Symbol>,
        values: Vec<bool>,
    ) -> Result<(), TraceError> {
        let name = name.into();
        if values.len() != self.k + 1 {
            return Err(TraceError::WrongLength {
                name,
                got: values.len(),
                k: self.k,
            });
        }
        self.bool_vars.insert(name, values);
        Ok(())
    }

    /// Integer value of `name` at instant `i`, if the symbol exists and
    /// `i` is in range.
    pub fn int(&self, name: &Symbol, i: usize) -> Option<i64> {
        self.int_vars.get(name).and_then(|v| v.get(i)).copied()
    }

    pub fn bool(&self, name: &Symbol, i: usize) -> Option<bool> {
        self.bool_vars.get(name).and_then(|v| v.get(i)).copied()
    }

    pub fn has_int(&self, name: &Symbol) -> bool {
        self.int_vars.contains_key(name)
    }

    pub fn has_bool(&self, name: &Symbol) -> bool {
        self.bool_vars.contains_key(name)
    }

    pub fn int_series(&self, name: &Symbol) -> Option<&[i64]> {
        self.int_vars.get(name).map(Vec::as_slice)
    }

    pub fn bool_series(&self, name: &Symbol) -> Option<&[bool]> {
        self.bool_vars.get(name).map(Vec::as_slice)
    }

    pub fn int_names(&self) -> impl Iterator<Item = &Symbol> {
        self.int_vars.keys()
    }

    pub fn bool_names(&self) -> impl Iterator<Item = &Symbol> {
        self.bool_vars.keys()
    }
}
