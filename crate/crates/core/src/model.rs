//! The pricing-model abstraction and name-joined evaluation.

use crate::error::{AttribError, Result};
use crate::factor::{ensure_unique, FactorId};
use crate::scenario::ScenarioVector;

/// A deterministic map from factor values to a price.
///
/// `price` receives values positionally in the order of `factors()`.
/// Implementations must be pure: equal inputs give bit-identical outputs.
pub trait PricingModel: Send + Sync {
    fn factors(&self) -> &[FactorId];

    fn price(&self, values: &[f64]) -> Result<f64>;
}

impl<M: PricingModel + ?Sized> PricingModel for &M {
    fn factors(&self) -> &[FactorId] {
        (**self).factors()
    }

    fn price(&self, values: &[f64]) -> Result<f64> {
        (**self).price(values)
    }
}

impl<M: PricingModel + ?Sized> PricingModel for Box<M> {
    fn factors(&self) -> &[FactorId] {
        (**self).factors()
    }

    fn price(&self, values: &[f64]) -> Result<f64> {
        (**self).price(values)
    }
}

/// Evaluates `model` at a scenario, matching scenario entries to model
/// factors by name.
pub fn evaluate<M: PricingModel + ?Sized>(model: &M, scenario: &ScenarioVector) -> Result<f64> {
    let values = model
        .factors()
        .iter()
        .map(|f| scenario.get(f).ok_or_else(|| AttribError::UnknownFactor(f.to_string())))
        .collect::<Result<Vec<f64>>>()?;
    model.price(&values)
}

/// A model built from a closure, for instruments without a dedicated type.
pub struct FnModel<F> {
    factors: Vec<FactorId>,
    f: F,
}

impl<F> FnModel<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(factors: Vec<FactorId>, f: F) -> Result<Self> {
        if factors.is_empty() {
            return Err(AttribError::input("a model needs at least one factor"));
        }
        ensure_unique(&factors)?;
        Ok(FnModel { factors, f })
    }
}

impl<F> PricingModel for FnModel<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    fn price(&self, values: &[f64]) -> Result<f64> {
        let p = (self.f)(values);
        if !p.is_finite() {
            return Err(AttribError::Domain {
                factor: self.factors.iter().map(FactorId::as_str).collect::<Vec<_>>().join("+"),
                value: p,
                message: "model returned a non-finite price".into(),
            });
        }
        Ok(p)
    }
}

/// Presents `inner` under a reordered factor list.
///
/// `factors` must be a permutation of the inner model's factors; values are
/// routed back to the inner model's positions by name.
pub struct Reordered<M> {
    inner: M,
    factors: Vec<FactorId>,
    // inner position -> outer position
    route: Vec<usize>,
}

impl<M: PricingModel> Reordered<M> {
    pub fn new(inner: M, factors: Vec<FactorId>) -> Result<Self> {
        ensure_unique(&factors)?;
        if factors.len() != inner.factors().len() {
            return Err(AttribError::input("reordered factor list has the wrong length"));
        }
        let route = inner
            .factors()
            .iter()
            .map(|f| {
                factors
                    .iter()
                    .position(|g| g == f)
                    .ok_or_else(|| AttribError::UnknownFactor(f.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Reordered { inner, factors, route })
    }
}

impl<M: PricingModel> PricingModel for Reordered<M> {
    fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    fn price(&self, values: &[f64]) -> Result<f64> {
        let inner: Vec<f64> = self.route.iter().map(|&i| values[i]).collect();
        self.inner.price(&inner)
    }
}
