//! Concrete pricing models: a constant-maturity foreign zero bond and an
//! FX-hedged foreign equity position.

use serde::{Deserialize, Serialize};

use crate::error::{AttribError, Result};
use crate::factor::{factor_ids, FactorId};
use crate::model::PricingModel;

pub const IR: &str = "IR";
pub const CS: &str = "CS";
pub const FX: &str = "FX";
pub const EQ: &str = "EQ";

/// Price per unit nominal of a zero bond with residual maturity `maturity`
/// years, discounted at `r + s` with annual compounding and converted at
/// the exchange rate `x` (domestic per foreign).
pub fn bond_price(r: f64, s: f64, x: f64, maturity: f64) -> Result<f64> {
    let base = 1.0 + r + s;
    if base.is_nan() || base <= 0.0 {
        return Err(AttribError::Domain {
            factor: format!("{IR}+{CS}"),
            value: r + s,
            message: "1 + r + s must be positive".into(),
        });
    }
    if !x.is_finite() {
        return Err(AttribError::Domain {
            factor: FX.into(),
            value: x,
            message: "exchange rate must be finite".into(),
        });
    }
    Ok(x / base.powf(maturity))
}

/// Value in domestic currency of a long equity position `y` hedged by a
/// short position in `y0` FX forwards struck at `x0`, marked linearly.
pub fn hedged_price(x: f64, y: f64, x0: f64, y0: f64) -> Result<f64> {
    for (name, v) in [(FX, x), (EQ, y), ("x0", x0), ("y0", y0)] {
        if !v.is_finite() {
            return Err(AttribError::Domain {
                factor: name.into(),
                value: v,
                message: "input must be finite".into(),
            });
        }
    }
    // x*y + y0*(x0 - x), grouped so that y == y0 gives x0*y0 bit-exactly
    Ok(x * (y - y0) + x0 * y0)
}

/// Constant-maturity bond with factors `(IR, CS, FX)`.
///
/// The maturity is the same at every valuation date; there is no aging or
/// pull to par.
#[derive(Debug, Clone)]
pub struct ConstantMaturityBond {
    maturity: f64,
    factors: Vec<FactorId>,
}

impl ConstantMaturityBond {
    pub const DEFAULT_MATURITY: f64 = 10.0;

    pub fn new(maturity: f64) -> Result<Self> {
        if !(maturity > 0.0 && maturity.is_finite()) {
            return Err(AttribError::input(format!(
                "bond maturity must be positive, got {maturity}"
            )));
        }
        Ok(ConstantMaturityBond {
            maturity,
            factors: factor_ids(&[IR, CS, FX]),
        })
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }
}

impl Default for ConstantMaturityBond {
    fn default() -> Self {
        ConstantMaturityBond::new(Self::DEFAULT_MATURITY).expect("valid default maturity")
    }
}

impl PricingModel for ConstantMaturityBond {
    fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    fn price(&self, values: &[f64]) -> Result<f64> {
        bond_price(values[0], values[1], values[2], self.maturity)
    }
}

/// Long foreign equity index hedged with FX forwards; factors `(FX, EQ)`.
///
/// Moving only FX leaves the value unchanged while the index sits at `y0`.
#[derive(Debug, Clone)]
pub struct HedgedForeignEquity {
    x0: f64,
    y0: f64,
    factors: Vec<FactorId>,
}

impl HedgedForeignEquity {
    pub fn new(x0: f64, y0: f64) -> Result<Self> {
        if !(x0 > 0.0 && x0.is_finite()) {
            return Err(AttribError::input(format!(
                "forward strike x0 must be positive, got {x0}"
            )));
        }
        if !(y0 > 0.0 && y0.is_finite()) {
            return Err(AttribError::input(format!(
                "initial equity level y0 must be positive, got {y0}"
            )));
        }
        Ok(HedgedForeignEquity {
            x0,
            y0,
            factors: factor_ids(&[FX, EQ]),
        })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }
}

impl PricingModel for HedgedForeignEquity {
    fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    fn price(&self, values: &[f64]) -> Result<f64> {
        hedged_price(values[0], values[1], self.x0, self.y0)
    }
}

/// Serializable model selection, as used in run configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Bond {
        #[serde(default = "default_maturity")]
        maturity: f64,
    },
    /// `x0`/`y0` default to the factor values at each period start.
    Hedged {
        #[serde(default)]
        x0: Option<f64>,
        #[serde(default)]
        y0: Option<f64>,
    },
}

fn default_maturity() -> f64 {
    ConstantMaturityBond::DEFAULT_MATURITY
}

impl ModelSpec {
    pub fn factor_names(&self) -> Vec<FactorId> {
        match self {
            ModelSpec::Bond { .. } => factor_ids(&[IR, CS, FX]),
            ModelSpec::Hedged { .. } => factor_ids(&[FX, EQ]),
        }
    }

    /// Instantiates the model; `start_values` (in `factor_names` order) fill
    /// any hedge parameters left unspecified.
    pub fn build(&self, start_values: &[f64]) -> Result<Box<dyn PricingModel>> {
        Ok(match *self {
            ModelSpec::Bond { maturity } => Box::new(ConstantMaturityBond::new(maturity)?),
            ModelSpec::Hedged { x0, y0 } => Box::new(HedgedForeignEquity::new(
                x0.unwrap_or(start_values[0]),
                y0.unwrap_or(start_values[1]),
            )?),
        })
    }
}
