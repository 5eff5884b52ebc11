use std::collections::BTreeSet;

use crate::data::Granularity;
use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::result::{AttributionResult, Method};
use crate::sum::exact_sum;

fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

fn contribution_of(result: &AttributionResult, factor: &FactorId) -> Result<f64> {
    result
        .contribution(factor)
        .ok_or_else(|| AttribError::UnknownFactor(factor.to_string()))
}

/// Largest minus smallest contribution of `factor` across the SU
/// decompositions of every update order.
pub fn permutation_range(results: &[AttributionResult], factor: &FactorId) -> Result<f64> {
    let first = results
        .first()
        .ok_or_else(|| AttribError::input("no SU results given"))?;
    let d = first.factors.len();
    let mut orders = BTreeSet::new();
    for r in results {
        if r.method != Method::Su {
            return Err(AttribError::input(format!(
                "expected only SU results, found {}",
                r.method
            )));
        }
        if r.factors != first.factors || r.partition != first.partition {
            return Err(AttribError::input("SU results cover different models or partitions"));
        }
        let order = r
            .permutation
            .as_ref()
            .ok_or_else(|| AttribError::input("SU result without an update order"))?;
        let as_set: BTreeSet<&FactorId> = order.iter().collect();
        if order.len() != d || as_set.len() != d || !first.factors.iter().all(|f| as_set.contains(f)) {
            return Err(AttribError::input(
                "SU result order is not a permutation of the factors",
            ));
        }
        if !orders.insert(order.clone()) {
            return Err(AttribError::input("duplicate update order among SU results"));
        }
    }
    if Some(orders.len()) != factorial(d) {
        return Err(AttribError::input(format!(
            "expected all {d}! update orders, got {}",
            orders.len()
        )));
    }
    let values = results
        .iter()
        .map(|r| contribution_of(r, factor))
        .collect::<Result<Vec<_>>>()?;
    Ok(spread(values))
}

/// Mean absolute unexplained p&l over OAT results.
pub fn mean_abs_unexplained(results: &[AttributionResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(AttribError::input("no OAT results given"));
    }
    if let Some(r) = results.iter().find(|r| r.method != Method::Oat) {
        return Err(AttribError::input(format!(
            "expected only OAT results, found {}",
            r.method
        )));
    }
    Ok(exact_sum(results.iter().map(|r| r.unexplained.abs())) / results.len() as f64)
}

/// Largest minus smallest ASU contribution of `factor` across the five
/// sub-interval granularities.
pub fn granularity_sensitivity(results: &[(Granularity, AttributionResult)], factor: &FactorId) -> Result<f64> {
    let seen: BTreeSet<Granularity> = results.iter().map(|(g, _)| *g).collect();
    if seen.len() != results.len() {
        return Err(AttribError::input("duplicate granularity among ASU results"));
    }
    if let Some(missing) = Granularity::ALL.iter().find(|g| !seen.contains(g)) {
        return Err(AttribError::input(format!("missing {missing} ASU result")));
    }
    let (_, first) = &results[0];
    for (g, r) in results {
        if r.method != Method::Asu {
            return Err(AttribError::input(format!("{g} result is {}, expected ASU", r.method)));
        }
        if r.factors != first.factors
            || r.partition.start() != first.partition.start()
            || r.partition.end() != first.partition.end()
        {
            return Err(AttribError::input("ASU results cover different models or periods"));
        }
    }
    let values = results
        .iter()
        .map(|(_, r)| contribution_of(r, factor))
        .collect::<Result<Vec<_>>>()?;
    Ok(spread(values))
}
