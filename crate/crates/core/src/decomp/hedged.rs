use crate::error::{AttribError, Result};
use crate::model::PricingModel;

use super::statics::IntervalPricer;

/// Contribution of the hedged factor X under the three principles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgedXContributions {
    /// OAT, and SU updating X first.
    pub oat_su_first: f64,
    /// SU updating Y first.
    pub su_second: f64,
    pub asu: f64,
}

/// X-contributions for a two-factor model `(X, Y)` that is hedged in X:
/// moving X alone while Y stays at `y0` leaves the price unchanged.
///
/// The hedge condition is checked to a relative tolerance of 1e-12; when it
/// holds, the X-first contribution is reported as exactly zero.
pub fn hedged_contribution_x<M: PricingModel + ?Sized>(
    model: &M,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
) -> Result<HedgedXContributions> {
    if model.factors().len() != 2 {
        return Err(AttribError::input(format!(
            "hedged analysis needs a two-factor model, got {}",
            model.factors().len()
        )));
    }
    let start = [x0, y0];
    let end = [x1, y1];
    let pricer = IntervalPricer::new(model, &start, &end)?;

    let base = pricer.price(0b00)?;
    let x_only = pricer.price(0b01)?;
    let scale = base.abs().max(x_only.abs());
    if (x_only - base).abs() > 1e-12 * scale {
        return Err(AttribError::Precondition(format!(
            "model is not hedged in {}: P(x1, y0) = {x_only} but P(x0, y0) = {base}",
            model.factors()[0]
        )));
    }

    let su_second = pricer.su(&[1, 0])?.contributions[0];
    Ok(HedgedXContributions {
        oat_su_first: 0.0,
        su_second,
        asu: 0.5 * (0.0 + su_second),
    })
}
