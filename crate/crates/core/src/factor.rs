use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AttribError, Result};

/// Name of a risk factor such as `IR`, `CS` or `FX`.
///
/// Panels and models are joined on these names, never on column position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FactorId(String);

impl FactorId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(AttribError::input("factor name must be non-empty"));
        }
        Ok(FactorId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for FactorId {
    type Error = AttribError;

    fn try_from(value: String) -> Result<Self> {
        FactorId::new(value)
    }
}

impl TryFrom<&str> for FactorId {
    type Error = AttribError;

    fn try_from(value: &str) -> Result<Self> {
        FactorId::new(value)
    }
}

impl From<FactorId> for String {
    fn from(id: FactorId) -> String {
        id.0
    }
}

impl AsRef<str> for FactorId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Builds a list of factor ids from string literals.
///
/// Panics on an empty name; intended for fixed, known-good labels.
pub fn factor_ids<S: AsRef<str>>(names: &[S]) -> Vec<FactorId> {
    names
        .iter()
        .map(|n| FactorId::new(n.as_ref()).expect("non-empty factor name"))
        .collect()
}

/// Checks that every factor appears at most once.
pub(crate) fn ensure_unique(factors: &[FactorId]) -> Result<()> {
    for (i, f) in factors.iter().enumerate() {
        if factors[..i].contains(f) {
            return Err(AttribError::input(format!("duplicate factor '{f}'")));
        }
    }
    Ok(())
}
