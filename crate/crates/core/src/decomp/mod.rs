//! One-at-a-time, sequential-updating and average-sequential-updating
//! (Shapley) decompositions, statically and over sub-interval partitions.

mod hedged;
mod multiperiod;
mod orders;
mod statics;

use chrono::NaiveDate;

use crate::error::{AttribError, Result};
use crate::model::PricingModel;
use crate::panel::{PartitionSpec, RiskFactorPanel};
use crate::result::{AttributionResult, Method};

pub use hedged::{hedged_contribution_x, HedgedXContributions};
pub use multiperiod::{decompose_multiperiod, decompose_multiperiod_with};
pub use orders::{enumerate_orders, UpdateOrder};
pub use statics::{AsuConfig, IntervalPricer, StaticDecomposition, DEFAULT_PERMUTATION_CAP, MAX_SUBSET_FACTORS};

/// Panel column of each model factor, joined by name.
pub(crate) fn bind_columns<M: PricingModel + ?Sized>(model: &M, panel: &RiskFactorPanel) -> Result<Vec<usize>> {
    model.factors().iter().map(|f| panel.factor_index(f)).collect()
}

/// Start and end rows of `[t0, t1]`, restricted to the model's factors.
pub(crate) struct BoundPanel<'a> {
    panel: &'a RiskFactorPanel,
    columns: Vec<usize>,
}

impl<'a> BoundPanel<'a> {
    pub(crate) fn new<M: PricingModel + ?Sized>(model: &M, panel: &'a RiskFactorPanel) -> Result<Self> {
        Ok(BoundPanel {
            panel,
            columns: bind_columns(model, panel)?,
        })
    }

    pub(crate) fn values_at(&self, date: NaiveDate) -> Result<Vec<f64>> {
        let row = self.panel.row(self.panel.date_index(date)?);
        Ok(self.columns.iter().map(|&c| row[c]).collect())
    }
}

fn check_interval(t0: NaiveDate, t1: NaiveDate) -> Result<()> {
    if t0 >= t1 {
        return Err(AttribError::input(format!("interval start {t0} must precede end {t1}")));
    }
    Ok(())
}

/// Static decomposition of one interval with the given method.
pub(crate) fn static_decomposition<M: PricingModel + ?Sized>(
    model: &M,
    bound: &BoundPanel<'_>,
    t0: NaiveDate,
    t1: NaiveDate,
    method: Method,
    order: Option<&[usize]>,
    config: &AsuConfig,
) -> Result<StaticDecomposition> {
    check_interval(t0, t1)?;
    let start = bound.values_at(t0)?;
    let end = bound.values_at(t1)?;
    let pricer = IntervalPricer::new(model, &start, &end)?;
    match method {
        Method::Oat => pricer.oat(),
        Method::Su => pricer.su(order.ok_or_else(|| AttribError::input("SU requires an update order"))?),
        Method::Asu => pricer.asu(config),
    }
}

fn into_result<M: PricingModel + ?Sized>(
    model: &M,
    method: Method,
    order: Option<&UpdateOrder>,
    partition: PartitionSpec,
    d: StaticDecomposition,
) -> AttributionResult {
    AttributionResult {
        method,
        permutation: order.map(|o| o.factors().to_vec()),
        factors: model.factors().to_vec(),
        contributions: d.contributions,
        unexplained: d.unexplained,
        delta_p: d.delta_p,
        partition,
    }
}

/// One-at-a-time decomposition of `[t0, t1]`; the shortfall against the
/// full price change is reported as `unexplained`.
pub fn oat_static<M: PricingModel + ?Sized>(
    model: &M,
    panel: &RiskFactorPanel,
    t0: NaiveDate,
    t1: NaiveDate,
) -> Result<AttributionResult> {
    let bound = BoundPanel::new(model, panel)?;
    let d = static_decomposition(model, &bound, t0, t1, Method::Oat, None, &AsuConfig::default())?;
    Ok(into_result(model, Method::Oat, None, PartitionSpec::single(t0, t1)?, d))
}

/// Sequential-updating decomposition of `[t0, t1]` along `order`.
pub fn su_static<M: PricingModel + ?Sized>(
    model: &M,
    panel: &RiskFactorPanel,
    t0: NaiveDate,
    t1: NaiveDate,
    order: &UpdateOrder,
) -> Result<AttributionResult> {
    let positions = order.positions_in(model.factors())?;
    let bound = BoundPanel::new(model, panel)?;
    let d = static_decomposition(
        model,
        &bound,
        t0,
        t1,
        Method::Su,
        Some(&positions),
        &AsuConfig::default(),
    )?;
    Ok(into_result(
        model,
        Method::Su,
        Some(order),
        PartitionSpec::single(t0, t1)?,
        d,
    ))
}

/// Average over all update orders (the Shapley value) on `[t0, t1]`.
pub fn asu_static<M: PricingModel + ?Sized>(
    model: &M,
    panel: &RiskFactorPanel,
    t0: NaiveDate,
    t1: NaiveDate,
) -> Result<AttributionResult> {
    asu_static_with(model, panel, t0, t1, &AsuConfig::default())
}

pub fn asu_static_with<M: PricingModel + ?Sized>(
    model: &M,
    panel: &RiskFactorPanel,
    t0: NaiveDate,
    t1: NaiveDate,
    config: &AsuConfig,
) -> Result<AttributionResult> {
    let bound = BoundPanel::new(model, panel)?;
    let d = static_decomposition(model, &bound, t0, t1, Method::Asu, None, config)?;
    Ok(into_result(model, Method::Asu, None, PartitionSpec::single(t0, t1)?, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{factor_ids, FactorId};
    use crate::model::FnModel;
    use crate::models::ConstantMaturityBond;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn bond_panel(end: [f64; 3]) -> RiskFactorPanel {
        RiskFactorPanel::new(
            factor_ids(&["FX", "IR", "CS"]),
            vec![d("2020-12-31"), d("2021-12-31")],
            vec![vec![1.0, 0.02, 0.01], vec![end[2], end[0], end[1]]],
        )
        .unwrap()
    }

    #[test]
    fn joins_on_names_not_positions() {
        let bond = ConstantMaturityBond::default();
        let p = bond_panel([0.03, 0.01, 1.1]);
        let r = oat_static(&bond, &p, d("2020-12-31"), d("2021-12-31")).unwrap();
        let ir = r.contribution(&FactorId::new("IR").unwrap()).unwrap();
        assert!((ir - -0.068_529_746_070_926).abs() < 1e-12);
    }

    #[test]
    fn degenerate_interval_is_all_zero() {
        let bond = ConstantMaturityBond::default();
        let p = bond_panel([0.02, 0.01, 1.0]);
        let (t0, t1) = (d("2020-12-31"), d("2021-12-31"));
        for r in [
            oat_static(&bond, &p, t0, t1).unwrap(),
            asu_static(&bond, &p, t0, t1).unwrap(),
            su_static(&bond, &p, t0, t1, &enumerate_orders(bond.factors())[3]).unwrap(),
        ] {
            assert!(r.contributions.iter().all(|&c| c == 0.0));
            assert_eq!(r.unexplained, 0.0);
            assert_eq!(r.delta_p, 0.0);
        }
    }

    #[test]
    fn single_factor_su_equals_delta() {
        let m = FnModel::new(factor_ids(&["A"]), |v| v[0] * v[0]).unwrap();
        let p = RiskFactorPanel::new(
            factor_ids(&["A"]),
            vec![d("2020-01-01"), d("2020-02-01")],
            vec![vec![1.5], vec![2.5]],
        )
        .unwrap();
        let r = su_static(
            &m,
            &p,
            d("2020-01-01"),
            d("2020-02-01"),
            &UpdateOrder::new(factor_ids(&["A"])),
        )
        .unwrap();
        assert_eq!(r.contributions, vec![4.0]);
        assert_eq!(r.delta_p, 4.0);
        assert_eq!(r.permutation.as_deref(), Some(&factor_ids(&["A"])[..]));
    }

    #[test]
    fn input_errors() {
        let bond = ConstantMaturityBond::default();
        let p = bond_panel([0.03, 0.01, 1.1]);
        let (t0, t1) = (d("2020-12-31"), d("2021-12-31"));
        assert!(oat_static(&bond, &p, t1, t0).is_err());
        assert!(matches!(
            oat_static(&bond, &p, t0, d("2021-06-30")),
            Err(AttribError::UnknownDate(_))
        ));
        assert!(su_static(&bond, &p, t0, t1, &UpdateOrder::new(factor_ids(&["IR", "CS"]))).is_err());
        let narrow = p
            .select(&factor_ids(&["IR", "CS"]), &factor_ids(&["IR", "CS"]))
            .unwrap();
        assert!(matches!(asu_static(&bond, &narrow, t0, t1), Err(AttribError::UnknownFactor(f)) if f == "FX"));
    }

    #[test]
    fn domain_errors_propagate() {
        let bond = ConstantMaturityBond::default();
        let p = bond_panel([-1.5, 0.01, 1.1]);
        let e = asu_static(&bond, &p, d("2020-12-31"), d("2021-12-31")).unwrap_err();
        assert!(matches!(e, AttribError::Domain { .. }));
    }
}
