use std::collections::BTreeSet;

use chrono::NaiveDate;

use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::panel::RiskFactorPanel;

/// Whether a scenario entry was taken at the interval start or end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Start,
    End,
}

/// One value per factor, each tagged with the date it was taken from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioVector {
    factors: Vec<FactorId>,
    values: Vec<f64>,
    provenance: Vec<Provenance>,
}

impl ScenarioVector {
    pub fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn get(&self, factor: &FactorId) -> Option<f64> {
        self.factors.iter().position(|f| f == factor).map(|i| self.values[i])
    }
}

/// Builds the mixed-time evaluation point: factors in `end_set` take their
/// `end_date` value, all others their `start_date` value.
pub fn make_scenario(
    panel: &RiskFactorPanel,
    start_date: NaiveDate,
    end_date: NaiveDate,
    end_set: &BTreeSet<FactorId>,
) -> Result<ScenarioVector> {
    let start = panel.date_index(start_date)?;
    let end = panel.date_index(end_date)?;
    if let Some(unknown) = end_set.iter().find(|f| !panel.factors().contains(f)) {
        return Err(AttribError::UnknownFactor(unknown.to_string()));
    }
    let (start_row, end_row) = (panel.row(start), panel.row(end));
    let mut values = Vec::with_capacity(panel.factors().len());
    let mut provenance = Vec::with_capacity(panel.factors().len());
    for (i, f) in panel.factors().iter().enumerate() {
        if end_set.contains(f) {
            values.push(end_row[i]);
            provenance.push(Provenance::End);
        } else {
            values.push(start_row[i]);
            provenance.push(Provenance::Start);
        }
    }
    Ok(ScenarioVector {
        factors: panel.factors().to_vec(),
        values,
        provenance,
    })
}
