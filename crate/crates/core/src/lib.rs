//! Profit-and-loss attribution between reporting dates.
//!
//! A [`PricingModel`] is revalued at mixed start/end scenarios of its risk
//! factors to split the price change into per-factor contributions under
//! three principles:
//!
//! * one-at-a-time (OAT): each factor moves alone; the remainder is
//!   unexplained,
//! * sequential updating (SU): factors move one after another in a given
//!   order,
//! * average sequential updating (ASU): the mean over all orders, i.e. the
//!   Shapley value.
//!
//! Each can be applied to a single interval or recursively over calendar
//! sub-intervals of a reporting period.

pub mod cli;
pub mod data;
pub mod decomp;
pub mod error;
pub mod factor;
pub mod model;
pub mod models;
pub mod panel;
pub mod report;
pub mod result;
pub mod scenario;
pub mod sum;

pub use error::{AttribError, ErrorKind, Result};
pub use factor::FactorId;
pub use model::{evaluate, FnModel, PricingModel};
pub use panel::{PartitionSpec, RiskFactorPanel};
pub use result::{AttributionResult, Method};
pub use scenario::{make_scenario, Provenance, ScenarioVector};
