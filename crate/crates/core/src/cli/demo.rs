//! The hedged S&P 500 example: a EUR investor long the index and short
//! `Y(0)` USD forwards struck at `X(0)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::decomp::{asu_static, hedged_contribution_x, oat_static, su_static, UpdateOrder};
use crate::error::Result;
use crate::factor::{factor_ids, FactorId};
use crate::model::evaluate;
use crate::models::{HedgedForeignEquity, EQ, FX};
use crate::panel::RiskFactorPanel;
use crate::scenario::make_scenario;

pub const X0: f64 = 0.95;
pub const X1: f64 = 0.79;
pub const Y0: f64 = 880.0;
pub const Y1: f64 = 1110.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Example1 {
    pub p0: f64,
    pub p1: f64,
    pub delta_p: f64,
    pub x_oat: f64,
    pub x_su_x_first: f64,
    pub x_su_y_first: f64,
    pub x_asu: f64,
    pub y_asu: f64,
}

fn dates() -> (NaiveDate, NaiveDate) {
    (
        NaiveDate::from_ymd_opt(2002, 12, 31).expect("valid"),
        NaiveDate::from_ymd_opt(2003, 12, 31).expect("valid"),
    )
}

pub fn example1() -> Result<Example1> {
    let model = HedgedForeignEquity::new(X0, Y0)?;
    let (t0, t1) = dates();
    let panel = RiskFactorPanel::new(factor_ids(&[FX, EQ]), vec![t0, t1], vec![vec![X0, Y0], vec![X1, Y1]])?;
    let fx = FactorId::new(FX)?;
    let eq = FactorId::new(EQ)?;
    let all: BTreeSet<FactorId> = [fx.clone(), eq.clone()].into();

    let p0 = evaluate(&model, &make_scenario(&panel, t0, t1, &BTreeSet::new())?)?;
    let p1 = evaluate(&model, &make_scenario(&panel, t0, t1, &all)?)?;
    let oat = oat_static(&model, &panel, t0, t1)?;
    let x_first = su_static(&model, &panel, t0, t1, &UpdateOrder::new(vec![fx.clone(), eq.clone()]))?;
    let y_first = su_static(&model, &panel, t0, t1, &UpdateOrder::new(vec![eq.clone(), fx.clone()]))?;
    let asu = asu_static(&model, &panel, t0, t1)?;
    // cross-check against the closed-form hedged wrapper
    let h = hedged_contribution_x(&model, X0, X1, Y0, Y1)?;
    debug_assert_eq!(h.asu, asu.contribution(&fx).unwrap_or(f64::NAN));

    let get = |r: &crate::result::AttributionResult, f: &FactorId| r.contribution(f).expect("model factor");
    Ok(Example1 {
        p0,
        p1,
        delta_p: asu.delta_p,
        x_oat: get(&oat, &fx),
        x_su_x_first: get(&x_first, &fx),
        x_su_y_first: get(&y_first, &fx),
        x_asu: get(&asu, &fx),
        y_asu: get(&asu, &eq),
    })
}

/// Renders the example as plain text.
pub fn render_example1(e: &Example1) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Hedged S&P 500 position of a EUR investor");
    let _ = writeln!(s, "  X (USDEUR):  {X0:.2} -> {X1:.2}");
    let _ = writeln!(s, "  Y (S&P 500): {Y0:.0} -> {Y1:.0}");
    let _ = writeln!(s, "  hedge: short {Y0:.0} FX forwards struck at {X0:.2}");
    let _ = writeln!(s);
    let _ = writeln!(s, "P(0)  = {:.1} EUR", e.p0);
    let _ = writeln!(s, "P(1)  = {:.1} EUR", e.p1);
    let _ = writeln!(s, "dP    = {:.1} EUR", e.delta_p);
    let _ = writeln!(s);
    let _ = writeln!(s, "method            X contribution  Y contribution");
    let _ = writeln!(s, "OAT               {:>14.2}", e.x_oat);
    let _ = writeln!(s, "SU (X first)      {:>14.2}", e.x_su_x_first);
    let _ = writeln!(s, "SU (Y first)      {:>14.2}", e.x_su_y_first);
    let _ = writeln!(s, "ASU               {:>14.2}  {:>14.2}", e.x_asu, e.y_asu);
    s
}
