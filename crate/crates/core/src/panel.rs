//! Dated risk-factor observations and sub-interval partitions.

use chrono::NaiveDate;

use crate::error::{AttribError, Result};
use crate::factor::{ensure_unique, FactorId};

/// A dated matrix of risk-factor observations, one row per date and one
/// column per factor.
///
/// Immutable once built: dates are strictly increasing and every value is
/// finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskFactorPanel {
    factors: Vec<FactorId>,
    dates: Vec<NaiveDate>,
    // row-major, dates.len() * factors.len()
    values: Vec<f64>,
}

impl RiskFactorPanel {
    /// Builds a panel from rows given in strictly increasing date order.
    pub fn new(factors: Vec<FactorId>, dates: Vec<NaiveDate>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(AttribError::Panel("panel needs at least one factor".into()));
        }
        ensure_unique(&factors).map_err(|e| AttribError::Panel(e.to_string()))?;
        if rows.len() != dates.len() {
            return Err(AttribError::Panel(format!(
                "{} dates but {} rows",
                dates.len(),
                rows.len()
            )));
        }
        for pair in dates.windows(2) {
            if pair[1] == pair[0] {
                return Err(AttribError::Panel(format!("duplicate date {}", pair[0])));
            }
            if pair[1] < pair[0] {
                return Err(AttribError::Panel(format!(
                    "dates not increasing: {} after {}",
                    pair[1], pair[0]
                )));
            }
        }
        let mut values = Vec::with_capacity(rows.len() * factors.len());
        for (date, row) in dates.iter().zip(&rows) {
            if row.len() != factors.len() {
                return Err(AttribError::Panel(format!(
                    "row {date} has {} values, expected {}",
                    row.len(),
                    factors.len()
                )));
            }
            for (f, v) in factors.iter().zip(row) {
                if !v.is_finite() {
                    return Err(AttribError::Panel(format!("non-finite value for {f} on {date}")));
                }
            }
            values.extend_from_slice(row);
        }
        Ok(RiskFactorPanel { factors, dates, values })
    }

    pub fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn num_dates(&self) -> usize {
        self.dates.len()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        let d = self.factors.len();
        &self.values[index * d..(index + 1) * d]
    }

    pub fn date_index(&self, date: NaiveDate) -> Result<usize> {
        self.dates
            .binary_search(&date)
            .map_err(|_| AttribError::UnknownDate(date))
    }

    pub fn factor_index(&self, factor: &FactorId) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f == factor)
            .ok_or_else(|| AttribError::UnknownFactor(factor.to_string()))
    }

    pub fn value(&self, date: NaiveDate, factor: &FactorId) -> Result<f64> {
        let r = self.date_index(date)?;
        let c = self.factor_index(factor)?;
        Ok(self.row(r)[c])
    }

    /// Index of the last observation on or before `date`.
    pub fn last_index_on_or_before(&self, date: NaiveDate) -> Option<usize> {
        match self.dates.binary_search(&date) {
            Ok(i) => Some(i),
            Err(0) => None,
            Err(i) => Some(i - 1),
        }
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.dates.first().copied()
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.dates.last().copied()
    }

    /// Returns a panel whose columns are `columns` (in that order), renamed to
    /// `names`.
    pub fn select(&self, columns: &[FactorId], names: &[FactorId]) -> Result<RiskFactorPanel> {
        if columns.len() != names.len() {
            return Err(AttribError::input("column and name lists differ in length"));
        }
        let idx = columns
            .iter()
            .map(|c| self.factor_index(c))
            .collect::<Result<Vec<_>>>()?;
        let rows = (0..self.dates.len())
            .map(|r| {
                let row = self.row(r);
                idx.iter().map(|&i| row[i]).collect()
            })
            .collect();
        RiskFactorPanel::new(names.to_vec(), self.dates.clone(), rows)
    }

    /// Multiplies the named columns by `factor` (used for unit conversion).
    pub fn scale_columns(&self, columns: &[FactorId], factor: f64) -> Result<RiskFactorPanel> {
        let idx = columns
            .iter()
            .map(|c| self.factor_index(c))
            .collect::<Result<Vec<_>>>()?;
        let d = self.factors.len();
        let mut out = self.clone();
        for (k, v) in out.values.iter_mut().enumerate() {
            if idx.contains(&(k % d)) {
                *v *= factor;
            }
        }
        Ok(out)
    }
}

/// Ordered sub-interval boundaries `t_0 < t_1 < ... < t_m` within a
/// reporting period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    boundaries: Vec<NaiveDate>,
}

impl PartitionSpec {
    pub fn new(boundaries: Vec<NaiveDate>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(AttribError::input("a partition needs at least two boundaries"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AttribError::input("partition boundaries must be strictly increasing"));
        }
        Ok(PartitionSpec { boundaries })
    }

    /// The single-interval partition `[t0, t1]`.
    pub fn single(t0: NaiveDate, t1: NaiveDate) -> Result<Self> {
        PartitionSpec::new(vec![t0, t1])
    }

    pub fn boundaries(&self) -> &[NaiveDate] {
        &self.boundaries
    }

    /// Number of sub-intervals `m`.
    pub fn len(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> NaiveDate {
        self.boundaries[0]
    }

    pub fn end(&self) -> NaiveDate {
        *self.boundaries.last().expect("at least two boundaries")
    }

    pub fn intervals(&self) -> impl Iterator<Item = (NaiveDate, NaiveDate)> + '_ {
        self.boundaries.windows(2).map(|w| (w[0], w[1]))
    }

    /// Verifies every boundary is a panel date.
    pub fn check_against(&self, panel: &RiskFactorPanel) -> Result<()> {
        let missing: Vec<NaiveDate> = self
            .boundaries
            .iter()
            .copied()
            .filter(|d| panel.date_index(*d).is_err())
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(AttribError::MissingBoundaries(missing))
        }
    }
}
