use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::Granularity;
use crate::decomp::{UpdateOrder, DEFAULT_PERMUTATION_CAP};
use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::models::ModelSpec;
use crate::result::Method;

/// Which SU update orders to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuOrders {
    /// Only `"all"` is accepted.
    Keyword(String),
    Explicit(Vec<Vec<FactorId>>),
}

impl Default for SuOrders {
    fn default() -> Self {
        SuOrders::Keyword("all".into())
    }
}

impl SuOrders {
    pub fn is_all(&self) -> bool {
        matches!(self, SuOrders::Keyword(k) if k == "all")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// One wide table, one long-format table and a diagnostics file.
    #[default]
    Combined,
    /// One table per (year, method) plus the diagnostics file.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

/// Generates the input panel instead of reading one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSource {
    pub seed: u64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_start_date")]
    pub start_date: NaiveDate,
}

fn default_steps() -> usize {
    252
}

fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2002, 12, 31).expect("valid date")
}

fn default_permutation_cap() -> usize {
    DEFAULT_PERMUTATION_CAP
}

fn default_nominal() -> f64 {
    1.0
}

/// A complete, serializable description of one `attrib run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub panel: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSource>,
    pub model: ModelSpec,
    /// Model factor name -> panel column. Empty means identical names.
    #[serde(default)]
    pub factor_columns: BTreeMap<String, String>,
    /// Panel columns quoted in percent.
    #[serde(default)]
    pub percent_columns: Vec<String>,
    #[serde(default)]
    pub forward_fill: bool,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub su_orders: SuOrders,
    pub granularities: Vec<Granularity>,
    /// Defaults to every full calendar year in the panel.
    #[serde(default)]
    pub years: Option<YearRange>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub layout: Layout,
    #[serde(default = "default_permutation_cap")]
    pub permutation_cap: usize,
    /// Divisor for percentage-point columns.
    #[serde(default = "default_nominal")]
    pub nominal: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AttribError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// `(model factor, panel column)` pairs in model factor order.
    pub fn column_mapping(&self) -> Vec<(FactorId, String)> {
        self.model
            .factor_names()
            .into_iter()
            .map(|f| {
                let column = self
                    .factor_columns
                    .get(f.as_str())
                    .cloned()
                    .unwrap_or_else(|| f.to_string());
                (f, column)
            })
            .collect()
    }

    /// Explicit SU orders, or all of them.
    pub fn update_orders(&self) -> Result<Vec<UpdateOrder>> {
        let factors = self.model.factor_names();
        match &self.su_orders {
            SuOrders::Keyword(_) => Ok(crate::decomp::enumerate_orders(&factors)),
            SuOrders::Explicit(list) => list
                .iter()
                .map(|o| {
                    let order = UpdateOrder::new(o.clone());
                    order
                        .positions_in(&factors)
                        .map_err(|e| AttribError::Config(e.to_string()))?;
                    Ok(order)
                })
                .collect(),
        }
    }

    /// Static checks that need no input data.
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(AttribError::Config(m));
        match (&self.panel, &self.synthetic) {
            (None, None) => return cfg("either 'panel' or 'synthetic' must be given".into()),
            (Some(_), Some(_)) => return cfg("'panel' and 'synthetic' are mutually exclusive".into()),
            _ => {}
        }
        if self.methods.is_empty() {
            return cfg("method set must be non-empty".into());
        }
        if self.granularities.is_empty() {
            return cfg("granularity list must be non-empty".into());
        }
        let names = self.model.factor_names();
        if !self.factor_columns.is_empty() {
            let keys: Vec<&str> = self.factor_columns.keys().map(String::as_str).collect();
            let mut expected: Vec<&str> = names.iter().map(FactorId::as_str).collect();
            expected.sort_unstable();
            if keys != expected {
                return cfg(format!(
                    "factor mapping covers {keys:?}, model needs exactly {expected:?}"
                ));
            }
        }
        if let SuOrders::Keyword(k) = &self.su_orders {
            if k != "all" {
                return cfg(format!("su_orders must be \"all\" or a list of orders, got \"{k}\""));
            }
        }
        if self.methods.contains(&Method::Su) {
            let orders = self.update_orders()?;
            if orders.is_empty() {
                return cfg("su_orders is empty".into());
            }
        }
        if let Some(y) = self.years {
            if y.first > y.last {
                return cfg(format!("year range {}..{} is empty", y.first, y.last));
            }
        }
        if self.permutation_cap > 10 {
            return cfg(format!("permutation_cap {} is above 10", self.permutation_cap));
        }
        if !(self.nominal > 0.0 && self.nominal.is_finite()) {
            return cfg(format!("nominal must be positive, got {}", self.nominal));
        }
        match self.model {
            ModelSpec::Bond { maturity } if !(maturity > 0.0 && maturity.is_finite()) => {
                cfg(format!("bond maturity must be positive, got {maturity}"))
            }
            ModelSpec::Hedged { x0, y0 } if x0.is_some_and(|v| v <= 0.0) || y0.is_some_and(|v| v <= 0.0) => {
                cfg("hedge parameters x0 and y0 must be positive".into())
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "panel": "data.csv",
        "model": {"kind": "bond", "maturity": 10},
        "factor_columns": {"IR": "USSW10", "CS": "C40410Y", "FX": "USDEUR"},
        "methods": ["oat", "su", "asu"],
        "granularities": ["annual", "monthly"],
        "years": {"first": 2003, "last": 2022},
        "output_dir": "out"
    }"#;

    #[test]
    fn parses_and_validates() {
        let c = RunConfig::from_json(BASE).unwrap();
        c.validate().unwrap();
        assert!(c.su_orders.is_all());
        assert_eq!(c.update_orders().unwrap().len(), 6);
        assert_eq!(
            c.column_mapping()[0],
            (FactorId::new("IR").unwrap(), "USSW10".to_string())
        );
        let again = RunConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn invalid_mapping() {
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.factor_columns.remove("FX");
        assert!(matches!(c.validate(), Err(AttribError::Config(_))));
        c.factor_columns.insert("EQ".into(), "SPX".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn other_validation_failures() {
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.methods.clear();
        assert!(c.validate().is_err());
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.su_orders = SuOrders::Keyword("some".into());
        assert!(c.validate().is_err());
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.su_orders = SuOrders::Explicit(vec![vec![FactorId::new("IR").unwrap()]]);
        assert!(c.validate().is_err());
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.panel = None;
        assert!(c.validate().is_err());
        assert!(RunConfig::from_json(r#"{"model": {"kind": "bond"}}"#).is_err());
        assert!(RunConfig::from_json(
            &BASE
                .replace("\"layout\"", "\"x\"")
                .replace("\"output_dir\"", "\"unknown\": 1, \"output_dir\"")
        )
        .is_err());
    }

    #[test]
    fn explicit_orders() {
        let text = BASE.replace("\"methods\"", "\"su_orders\": [[\"CS\",\"IR\",\"FX\"]], \"methods\"");
        let c = RunConfig::from_json(&text).unwrap();
        c.validate().unwrap();
        assert!(!c.su_orders.is_all());
        assert_eq!(c.update_orders().unwrap()[0].to_string(), "CS IR FX");
    }
}
