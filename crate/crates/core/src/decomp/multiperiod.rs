use rayon::prelude::*;

use crate::error::{AttribError, Result};
use crate::model::PricingModel;
use crate::panel::{PartitionSpec, RiskFactorPanel};
use crate::result::{AttributionResult, Method};
use crate::sum::exact_sum;

use super::orders::UpdateOrder;
use super::statics::AsuConfig;
use super::{static_decomposition, BoundPanel};

/// Applies a static decomposition on every sub-interval of `partition` and
/// sums the contributions per factor.
pub fn decompose_multiperiod<M: PricingModel + ?Sized>(
    model: &M,
    panel: &RiskFactorPanel,
    partition: &PartitionSpec,
    method: Method,
    order: Option<&UpdateOrder>,
) -> Result<AttributionResult> {
    decompose_multiperiod_with(model, panel, partition, method, order, &AsuConfig::default())
}

pub fn decompose_multiperiod_with<M: PricingModel + ?Sized>(
    model: &M,
    panel: &RiskFactorPanel,
    partition: &PartitionSpec,
    method: Method,
    order: Option<&UpdateOrder>,
    config: &AsuConfig,
) -> Result<AttributionResult> {
    let positions = match (method, order) {
        (Method::Su, Some(o)) => Some(o.positions_in(model.factors())?),
        (Method::Su, None) => return Err(AttribError::input("SU requires an update order")),
        (_, Some(_)) => return Err(AttribError::input(format!("{method} does not take an update order"))),
        (_, None) => None,
    };
    partition.check_against(panel)?;
    let bound = BoundPanel::new(model, panel)?;
    let intervals: Vec<_> = partition.intervals().collect();

    // Per-interval results are reduced with an order-independent exact sum,
    // so the parallel schedule cannot change the output bits.
    let pieces = intervals
        .par_iter()
        .map(|&(a, b)| static_decomposition(model, &bound, a, b, method, positions.as_deref(), config))
        .collect::<Result<Vec<_>>>()?;

    let d = model.factors().len();
    let contributions = (0..d)
        .map(|f| exact_sum(pieces.iter().map(|p| p.contributions[f])))
        .collect();
    let unexplained = match method {
        Method::Oat => exact_sum(pieces.iter().map(|p| p.unexplained)),
        Method::Su | Method::Asu => 0.0,
    };
    let p0 = model.price(&bound.values_at(partition.start())?)?;
    let p1 = model.price(&bound.values_at(partition.end())?)?;

    Ok(AttributionResult {
        method,
        permutation: order.map(|o| o.factors().to_vec()),
        factors: model.factors().to_vec(),
        contributions,
        unexplained,
        delta_p: p1 - p0,
        partition: partition.clone(),
    })
}
