use std::fmt;

use crate::error::{AttribError, Result};
use crate::factor::FactorId;

/// An update order for sequential updating: a permutation of the factor set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpdateOrder(Vec<FactorId>);

impl UpdateOrder {
    pub fn new(permutation: Vec<FactorId>) -> Self {
        UpdateOrder(permutation)
    }

    pub fn factors(&self) -> &[FactorId] {
        &self.0
    }

    /// Positions of this order's factors within `factor_set`; fails unless
    /// the order is a bijection on `factor_set`.
    pub fn positions_in(&self, factor_set: &[FactorId]) -> Result<Vec<usize>> {
        if self.0.len() != factor_set.len() {
            return Err(AttribError::input(format!(
                "update order ({self}) has {} factors, model has {}",
                self.0.len(),
                factor_set.len()
            )));
        }
        let mut seen = vec![false; factor_set.len()];
        let mut positions = Vec::with_capacity(self.0.len());
        for f in &self.0 {
            let i = factor_set
                .iter()
                .position(|g| g == f)
                .ok_or_else(|| AttribError::input(format!("update order names unknown factor '{f}'")))?;
            if seen[i] {
                return Err(AttribError::input(format!("update order repeats factor '{f}'")));
            }
            seen[i] = true;
            positions.push(i);
        }
        Ok(positions)
    }
}

impl fmt::Display for UpdateOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(FactorId::as_str).collect();
        f.write_str(&names.join(" "))
    }
}

/// Rearranges `perm` into the next permutation in lexicographic order.
/// Returns `false` (leaving `perm` sorted ascending) after the last one.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// All `d!` update orders of `factors`, in lexicographic order of factor
/// positions.
pub fn enumerate_orders(factors: &[FactorId]) -> Vec<UpdateOrder> {
    let mut perm: Vec<usize> = (0..factors.len()).collect();
    let mut out = Vec::new();
    loop {
        out.push(UpdateOrder(perm.iter().map(|&i| factors[i].clone()).collect()));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_ids;
    use std::collections::BTreeSet;

    #[test]
    fn counts() {
        assert_eq!(enumerate_orders(&factor_ids(&["A"])).len(), 1);
        assert_eq!(enumerate_orders(&factor_ids(&["A", "B", "C"])).len(), 6);
        let four = enumerate_orders(&factor_ids(&["A", "B", "C", "D"]));
        assert_eq!(four.len(), 24);
        let unique: BTreeSet<_> = four.iter().cloned().collect();
        assert_eq!(unique.len(), 24);
    }

    #[test]
    fn three_factor_orders_match_the_six_waterfalls() {
        let table: BTreeSet<UpdateOrder> = [
            ["CS", "IR", "FX"],
            ["IR", "CS", "FX"],
            ["IR", "FX", "CS"],
            ["CS", "FX", "IR"],
            ["FX", "IR", "CS"],
            ["FX", "CS", "IR"],
        ]
        .iter()
        .map(|o| UpdateOrder::new(factor_ids(o)))
        .collect();
        let got: BTreeSet<UpdateOrder> = enumerate_orders(&factor_ids(&["IR", "CS", "FX"])).into_iter().collect();
        assert_eq!(got, table);
    }

    #[test]
    fn lexicographic_positions() {
        let orders = enumerate_orders(&factor_ids(&["IR", "CS", "FX"]));
        assert_eq!(orders[0].to_string(), "IR CS FX");
        assert_eq!(orders[1].to_string(), "IR FX CS");
        assert_eq!(orders[5].to_string(), "FX CS IR");
    }

    #[test]
    fn bijection_check() {
        let set = factor_ids(&["IR", "CS", "FX"]);
        assert_eq!(
            UpdateOrder::new(factor_ids(&["FX", "IR", "CS"]))
                .positions_in(&set)
                .unwrap(),
            vec![2, 0, 1]
        );
        assert!(UpdateOrder::new(factor_ids(&["FX", "IR"])).positions_in(&set).is_err());
        assert!(UpdateOrder::new(factor_ids(&["FX", "IR", "IR"]))
            .positions_in(&set)
            .is_err());
        assert!(UpdateOrder::new(factor_ids(&["FX", "IR", "EQ"]))
            .positions_in(&set)
            .is_err());
    }
}
