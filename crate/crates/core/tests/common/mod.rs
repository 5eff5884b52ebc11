#![allow(dead_code)]

use attrib::decomp::UpdateOrder;
use attrib::factor::factor_ids;
use attrib::models::{ConstantMaturityBond, HedgedForeignEquity};
use attrib::{FactorId, FnModel, PartitionSpec, PricingModel, RiskFactorPanel};
use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn d(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a - b| / max(|a|, |b|)`, zero when both are equal.
pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub struct Instance {
    pub label: String,
    pub model: Box<dyn PricingModel>,
    pub panel: RiskFactorPanel,
    pub partition: PartitionSpec,
    pub order: UpdateOrder,
}

pub fn dates_for(n: usize) -> Vec<NaiveDate> {
    let start = d("2020-01-01");
    (0..n).map(|i| start + Days::new(i as u64)).collect()
}

/// Random walk rows, each factor drawn in `[lo, hi]` and moving by at most
/// `step` per date.
pub fn walk_rows(rng: &mut ChaCha8Rng, n: usize, bounds: &[(f64, f64, f64)]) -> Vec<Vec<f64>> {
    let mut current: Vec<f64> = bounds.iter().map(|&(lo, hi, _)| rng.random_range(lo..hi)).collect();
    let mut rows = vec![current.clone()];
    for _ in 1..n {
        for (v, &(lo, hi, step)) in current.iter_mut().zip(bounds) {
            *v = (*v + rng.random_range(-step..step)).clamp(lo, hi);
        }
        rows.push(current.clone());
    }
    rows
}

/// Random sorted subset of panel dates containing at least two dates.
pub fn random_partition(rng: &mut ChaCha8Rng, panel: &RiskFactorPanel) -> PartitionSpec {
    let n = panel.num_dates();
    loop {
        let picked: Vec<NaiveDate> = panel.dates().iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if picked.len() >= 2 || n < 2 {
            return PartitionSpec::new(picked).unwrap();
        }
    }
}

/// Generic smooth model on `d` factors: linear, pairwise and exponential
/// terms with random coefficients.
pub fn random_smooth_model(rng: &mut ChaCha8Rng, names: Vec<FactorId>) -> Box<dyn PricingModel> {
    let d = names.len();
    let a: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    let b: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let c = rng.random_range(0.5..2.0);
    Box::new(
        FnModel::new(names, move |v: &[f64]| {
            let mut p = 0.0;
            let mut e = 0.0;
            for i in 0..d {
                p += a[i] * v[i];
                e += w[i] * v[i];
                for j in i + 1..d {
                    p += b[i * d + j] * v[i] * v[j];
                }
            }
            p + c * (e / d as f64).exp()
        })
        .unwrap(),
    )
}

pub fn names(d: usize) -> Vec<FactorId> {
    factor_ids(&["F0", "F1", "F2", "F3", "F4", "F5", "F6", "F7"][..d])
}

/// A random (model, panel, partition, order) instance. Cycles through the
/// bond model, the hedged model and generic models with 2 to 4 factors.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = rng(seed);
    let n = rng.random_range(2..20);
    let kind = seed % 5;
    let (label, model, factors, rows): (String, Box<dyn PricingModel>, Vec<FactorId>, _) = match kind {
        0 => {
            let maturity = rng.random_range(1.0..30.0);
            let rows = walk_rows(
                &mut rng,
                n,
                &[(-0.01, 0.08, 0.003), (0.0, 0.04, 0.001), (0.6, 1.4, 0.02)],
            );
            (
                "bond".into(),
                Box::new(ConstantMaturityBond::new(maturity).unwrap()),
                factor_ids(&["IR", "CS", "FX"]),
                rows,
            )
        }
        1 => {
            let rows = walk_rows(&mut rng, n, &[(0.6, 1.4, 0.02), (400.0, 2500.0, 40.0)]);
            let (x0, y0) = (rows[0][0], rows[0][1]);
            (
                "hedged".into(),
                Box::new(HedgedForeignEquity::new(x0, y0).unwrap()),
                factor_ids(&["FX", "EQ"]),
                rows,
            )
        }
        _ => {
            let d = kind as usize; // 2, 3 or 4
            let bounds = vec![(-1.5, 1.5, 0.3); d];
            let rows = walk_rows(&mut rng, n, &bounds);
            let names = names(d);
            (
                format!("smooth d={d}"),
                random_smooth_model(&mut rng, names.clone()),
                names,
                rows,
            )
        }
    };
    let panel = RiskFactorPanel::new(factors.clone(), dates_for(n), rows).unwrap();
    let partition = random_partition(&mut rng, &panel);
    let mut order = factors;
    order.shuffle(&mut rng);
    Instance {
        label: format!("{label} seed={seed}"),
        model,
        panel,
        partition,
        order: UpdateOrder::new(order),
    }
}
