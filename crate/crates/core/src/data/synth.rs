use chrono::{Datelike, Days, NaiveDate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::models::{CS, EQ, FX, IR};
use crate::panel::RiskFactorPanel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    /// `v + drift + vol * z`; for rates and spreads.
    Arithmetic,
    /// `v * exp(drift + vol * z)`; for exchange rates and index levels.
    Geometric,
}

/// Random-walk parameters of one synthetic factor, per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorWalk {
    pub name: FactorId,
    pub start: f64,
    pub volatility: f64,
    pub drift: f64,
    pub kind: WalkKind,
}

impl FactorWalk {
    pub fn new(name: &str, start: f64, volatility: f64, drift: f64, kind: WalkKind) -> Result<Self> {
        Ok(FactorWalk {
            name: FactorId::new(name)?,
            start,
            volatility,
            drift,
            kind,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub factors: Vec<FactorWalk>,
    pub steps: usize,
    pub seed: u64,
    /// Date of the first observation; later observations fall on weekdays.
    pub start_date: NaiveDate,
}

impl SyntheticSpec {
    /// Daily IR, CS and FX paths with volatilities of the order seen for a
    /// USD 10y swap rate, an A-rated 10y spread and EUR per USD.
    pub fn bond_like(seed: u64, steps: usize, start_date: NaiveDate) -> Self {
        SyntheticSpec {
            factors: vec![
                FactorWalk::new(IR, 0.04, 0.0006, 0.0, WalkKind::Arithmetic).expect("static name"),
                FactorWalk::new(CS, 0.012, 0.0002, 0.0, WalkKind::Arithmetic).expect("static name"),
                FactorWalk::new(FX, 0.95, 0.006, 0.0, WalkKind::Geometric).expect("static name"),
            ],
            steps,
            seed,
            start_date,
        }
    }

    /// Daily FX and equity index paths for the hedged portfolio.
    pub fn hedged_like(seed: u64, steps: usize, start_date: NaiveDate) -> Self {
        SyntheticSpec {
            factors: vec![
                FactorWalk::new(FX, 0.95, 0.006, 0.0, WalkKind::Geometric).expect("static name"),
                FactorWalk::new(EQ, 880.0, 0.012, 0.0, WalkKind::Geometric).expect("static name"),
            ],
            steps,
            seed,
            start_date,
        }
    }
}

fn next_weekday(date: NaiveDate) -> NaiveDate {
    let mut d = date + Days::new(1);
    while d.weekday().number_from_monday() > 5 {
        d = d + Days::new(1);
    }
    d
}

/// Seeded random-walk panel with `steps + 1` weekday observations.
/// The same `SyntheticSpec` always yields a bit-identical panel.
pub fn generate_synthetic_panel(spec: &SyntheticSpec) -> Result<RiskFactorPanel> {
    if spec.steps == 0 {
        return Err(AttribError::input("synthetic panel needs at least one step"));
    }
    if spec.factors.is_empty() {
        return Err(AttribError::input("synthetic panel needs at least one factor"));
    }
    for f in &spec.factors {
        if f.volatility.is_nan() || f.volatility < 0.0 || f.volatility.is_infinite() {
            return Err(AttribError::input(format!(
                "volatility of {} must be non-negative",
                f.name
            )));
        }
        if !f.start.is_finite() || !f.drift.is_finite() {
            return Err(AttribError::input(format!(
                "start and drift of {} must be finite",
                f.name
            )));
        }
        if f.kind == WalkKind::Geometric && f.start <= 0.0 {
            return Err(AttribError::input(format!(
                "geometric walk for {} needs a positive start, got {}",
                f.name, f.start
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut dates = Vec::with_capacity(spec.steps + 1);
    let mut rows = Vec::with_capacity(spec.steps + 1);
    let mut date = spec.start_date;
    let mut current: Vec<f64> = spec.factors.iter().map(|f| f.start).collect();
    dates.push(date);
    rows.push(current.clone());
    for _ in 0..spec.steps {
        date = next_weekday(date);
        for (v, f) in current.iter_mut().zip(&spec.factors) {
            let z: f64 = StandardNormal.sample(&mut rng);
            let shock = f.drift + f.volatility * z;
            *v = match f.kind {
                WalkKind::Arithmetic => *v + shock,
                WalkKind::Geometric => *v * shock.exp(),
            };
        }
        dates.push(date);
        rows.push(current.clone());
    }
    RiskFactorPanel::new(spec.factors.iter().map(|f| f.name.clone()).collect(), dates, rows)
}
