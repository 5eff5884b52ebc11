use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::panel::PartitionSpec;

/// Decomposition principle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// One-at-a-time ("bump and reset").
    Oat,
    /// Sequential updating ("waterfall") along one update order.
    Su,
    /// Average of all sequential updating orders (the Shapley value).
    Asu,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Oat => "OAT",
            Method::Su => "SU",
            Method::Asu => "ASU",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = AttribError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oat" => Ok(Method::Oat),
            "su" => Ok(Method::Su),
            "asu" => Ok(Method::Asu),
            _ => Err(AttribError::input(format!("unknown method '{s}'"))),
        }
    }
}

/// Per-factor contributions of one decomposition.
///
/// `contributions[i]` belongs to `factors[i]`, which follows the model's
/// factor order. For SU and ASU `unexplained` is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionResult {
    pub method: Method,
    /// The update order, present iff `method == Method::Su`.
    pub permutation: Option<Vec<FactorId>>,
    pub factors: Vec<FactorId>,
    pub contributions: Vec<f64>,
    pub unexplained: f64,
    pub delta_p: f64,
    pub partition: PartitionSpec,
}

impl AttributionResult {
    pub fn contribution(&self, factor: &FactorId) -> Option<f64> {
        self.factors
            .iter()
            .position(|f| f == factor)
            .map(|i| self.contributions[i])
    }

    pub fn explained(&self) -> f64 {
        crate::sum::exact_sum(self.contributions.iter().copied())
    }
}
