//! Single-interval decompositions on explicit start and end factor vectors.
//!
//! Scenarios are addressed by a bit mask over model factor positions: bit `i`
//! set means factor `i` takes its end value.

use crate::error::{AttribError, Result};
use crate::model::PricingModel;
use crate::sum::{exact_sum, ExactSum};

use super::orders::next_permutation;

/// Default largest factor count for which ASU walks all `d!` orders.
pub const DEFAULT_PERMUTATION_CAP: usize = 8;

/// Largest factor count supported by the subset-weighted ASU path.
pub const MAX_SUBSET_FACTORS: usize = 24;

/// Contributions over one interval, in model factor order.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticDecomposition {
    pub contributions: Vec<f64>,
    pub unexplained: f64,
    pub delta_p: f64,
}

/// How the ASU contributions are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsuConfig {
    /// Walk all orders when `d <= permutation_cap`, else use the subset form.
    pub permutation_cap: usize,
}

impl Default for AsuConfig {
    fn default() -> Self {
        AsuConfig {
            permutation_cap: DEFAULT_PERMUTATION_CAP,
        }
    }
}

/// A model bound to the start and end values of one interval.
pub struct IntervalPricer<'a, M: ?Sized> {
    model: &'a M,
    start: &'a [f64],
    end: &'a [f64],
}

impl<'a, M: PricingModel + ?Sized> IntervalPricer<'a, M> {
    pub fn new(model: &'a M, start: &'a [f64], end: &'a [f64]) -> Result<Self> {
        let d = model.factors().len();
        if d == 0 {
            return Err(AttribError::input("model has no factors"));
        }
        if start.len() != d || end.len() != d {
            return Err(AttribError::input(format!(
                "expected {d} start and end values, got {} and {}",
                start.len(),
                end.len()
            )));
        }
        if d >= 64 {
            return Err(AttribError::input(format!("{d} factors exceed the 63-factor limit")));
        }
        Ok(IntervalPricer { model, start, end })
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    fn full_mask(&self) -> u64 {
        (1u64 << self.dim()) - 1
    }

    /// Price with the factors in `mask` at their end values.
    pub fn price(&self, mask: u64) -> Result<f64> {
        let values: Vec<f64> = (0..self.dim())
            .map(|i| if mask >> i & 1 == 1 { self.end[i] } else { self.start[i] })
            .collect();
        self.model.price(&values)
    }

    /// Prices of all `2^d` scenarios, indexed by mask.
    pub fn price_table(&self) -> Result<Vec<f64>> {
        if self.dim() > MAX_SUBSET_FACTORS {
            return Err(AttribError::input(format!(
                "{} factors exceed the {MAX_SUBSET_FACTORS}-factor limit for exact Shapley values",
                self.dim()
            )));
        }
        (0..=self.full_mask()).map(|m| self.price(m)).collect()
    }

    fn delta_p(&self) -> Result<(f64, f64)> {
        let p0 = self.price(0)?;
        let p1 = self.price(self.full_mask())?;
        Ok((p0, p1 - p0))
    }

    /// One-at-a-time: each factor moves alone from start to end.
    pub fn oat(&self) -> Result<StaticDecomposition> {
        let (base, delta_p) = self.delta_p()?;
        let contributions = (0..self.dim())
            .map(|i| Ok(self.price(1 << i)? - base))
            .collect::<Result<Vec<f64>>>()?;
        let unexplained = exact_sum(std::iter::once(delta_p).chain(contributions.iter().map(|c| -c)));
        Ok(StaticDecomposition {
            contributions,
            unexplained,
            delta_p,
        })
    }

    /// Sequential updating along `order` (factor positions).
    pub fn su(&self, order: &[usize]) -> Result<StaticDecomposition> {
        let (_, delta_p) = self.delta_p()?;
        let mut contributions = vec![0.0; self.dim()];
        let mut mask = 0u64;
        let mut prev = self.price(0)?;
        for &i in order {
            mask |= 1 << i;
            let next = self.price(mask)?;
            contributions[i] = next - prev;
            prev = next;
        }
        Ok(StaticDecomposition {
            contributions,
            unexplained: 0.0,
            delta_p,
        })
    }

    /// ASU, choosing the path by factor count.
    pub fn asu(&self, config: &AsuConfig) -> Result<StaticDecomposition> {
        if self.dim() <= config.permutation_cap {
            self.asu_by_permutations()
        } else {
            self.asu_by_subsets()
        }
    }

    /// ASU as the mean over all `d!` update orders, walked in lexicographic
    /// order against a memoized price table.
    pub fn asu_by_permutations(&self) -> Result<StaticDecomposition> {
        let d = self.dim();
        if d > 12 {
            return Err(AttribError::input(format!(
                "{d}! update orders is too many to enumerate"
            )));
        }
        let table = self.price_table()?;
        let mut acc = vec![ExactSum::new(); d];
        let mut perm: Vec<usize> = (0..d).collect();
        let mut count: u64 = 0;
        loop {
            let mut mask = 0usize;
            for &i in &perm {
                let next = mask | 1 << i;
                acc[i].add(table[next] - table[mask]);
                mask = next;
            }
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let n = count as f64;
        let delta_p = table[table.len() - 1] - table[0];
        Ok(StaticDecomposition {
            contributions: acc.iter().map(|a| a.value() / n).collect(),
            unexplained: 0.0,
            delta_p,
        })
    }

    /// ASU in subset-weighted form: each marginal `P(S+f) - P(S)` is
    /// weighted by `|S|! (d-|S|-1)! / d!`.
    pub fn asu_by_subsets(&self) -> Result<StaticDecomposition> {
        let d = self.dim();
        let table = self.price_table()?;
        // 1 / weight for coalitions of size k: d * C(d-1, k)
        let mut inv_weight = Vec::with_capacity(d);
        let mut binom = 1.0f64;
        for k in 0..d {
            inv_weight.push(d as f64 * binom);
            binom = binom * (d - 1 - k) as f64 / (k + 1) as f64;
        }
        let contributions = (0..d)
            .map(|f| {
                let bit = 1usize << f;
                let mut by_size = vec![ExactSum::new(); d];
                for s in 0..table.len() {
                    if s & bit == 0 {
                        by_size[s.count_ones() as usize].add(table[s | bit] - table[s]);
                    }
                }
                exact_sum(by_size.iter().zip(&inv_weight).map(|(acc, w)| acc.value() / w))
            })
            .collect();
        let delta_p = table[table.len() - 1] - table[0];
        Ok(StaticDecomposition {
            contributions,
            unexplained: 0.0,
            delta_p,
        })
    }
}
