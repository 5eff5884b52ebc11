//! The `run` pipeline: ingest, decompose every year, granularity and
//! method, and write the report files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::Datelike;
use rayon::prelude::*;

use crate::data::{
    business_years, generate_synthetic_panel, make_partition, read_panel_with, Granularity, ReadOptions, SyntheticSpec,
};
use crate::decomp::{decompose_multiperiod_with, AsuConfig};
use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::models::ModelSpec;
use crate::panel::RiskFactorPanel;
use crate::report::{
    emit_long, emit_table, granularity_sensitivity, mean_abs_unexplained, permutation_range, ReportMethod,
    YearlyAttributionTable,
};
use crate::result::{AttributionResult, Method};
use crate::sum::exact_sum;

use super::config::{Layout, RunConfig};

/// Relative tolerance between the ASU path and the mean of all SU orders.
pub const ASU_CHECK_TOLERANCE: f64 = 1e-9;

/// A scalar statistic for the diagnostics file.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub statistic: &'static str,
    pub year: Option<i32>,
    pub granularity: Option<Granularity>,
    pub factor: Option<FactorId>,
    pub value: f64,
}

/// Everything a run computes, before anything is written.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub table: YearlyAttributionTable,
    pub diagnostics: Vec<Diagnostic>,
}

struct Job {
    year: i32,
    granularity: Granularity,
    rows: Vec<(ReportMethod, AttributionResult)>,
}

/// Reads or generates the panel and maps its columns onto model factors.
pub fn load_panel(config: &RunConfig) -> Result<RiskFactorPanel> {
    let raw = if let Some(path) = &config.panel {
        let file = fs::File::open(path)
            .map_err(|e| AttribError::input(format!("cannot open panel {}: {e}", path.display())))?;
        let options = ReadOptions {
            percent_columns: config.percent_columns.clone(),
            forward_fill: config.forward_fill,
        };
        read_panel_with(std::io::BufReader::new(file), &options)?
    } else {
        let synth = config.synthetic.as_ref().expect("validated: panel or synthetic");
        let spec = match config.model {
            ModelSpec::Bond { .. } => SyntheticSpec::bond_like(synth.seed, synth.steps, synth.start_date),
            ModelSpec::Hedged { .. } => SyntheticSpec::hedged_like(synth.seed, synth.steps, synth.start_date),
        };
        generate_synthetic_panel(&spec)?
    };
    let mapping = config.column_mapping();
    let (names, columns): (Vec<FactorId>, Vec<FactorId>) = mapping
        .into_iter()
        .map(|(f, c)| FactorId::new(c).map(|c| (f, c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    for c in &columns {
        if raw.factor_index(c).is_err() {
            return Err(AttribError::Config(format!(
                "factor mapping names column '{c}' absent from the panel"
            )));
        }
    }
    raw.select(&columns, &names)
}

fn default_years(panel: &RiskFactorPanel) -> Result<(i32, i32)> {
    let (first, last) = panel
        .first_date()
        .zip(panel.last_date())
        .ok_or_else(|| AttribError::input("panel is empty"))?;
    let last_year = if last.month() == 12 {
        last.year()
    } else {
        last.year() - 1
    };
    let first_year = first.year() + 1;
    if first_year > last_year {
        return Err(AttribError::input("panel contains no complete business year"));
    }
    Ok((first_year, last_year))
}

fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(a.abs()).max(b.abs())
}

/// Computes all decompositions and statistics for `config`.
pub fn compute(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let panel = load_panel(config)?;
    let (first, last) = match config.years {
        Some(y) => (y.first, y.last),
        None => default_years(&panel)?,
    };
    let years = business_years(&panel, first, last)?;
    let orders = if config.methods.contains(&Method::Su) {
        config.update_orders()?
    } else {
        Vec::new()
    };
    let asu_config = AsuConfig {
        permutation_cap: config.permutation_cap,
    };
    let mut methods = config.methods.clone();
    methods.sort();
    methods.dedup();
    let mut granularities = config.granularities.clone();
    granularities.sort();
    granularities.dedup();
    let all_orders = config.su_orders.is_all();

    let tasks: Vec<(i32, chrono::NaiveDate, chrono::NaiveDate, Granularity)> = years
        .iter()
        .zip(first..)
        .flat_map(|(&(s, e), year)| granularities.iter().map(move |&g| (year, s, e, g)))
        .collect();

    let jobs = tasks
        .par_iter()
        .map(|&(year, start, end, granularity)| -> Result<Job> {
            let start_row = panel.row(panel.date_index(start)?);
            let model = config.model.build(start_row)?;
            let partition = make_partition(&panel, start, end, granularity)?;
            let mut rows = Vec::new();
            let mut su_results = Vec::new();
            let mut asu = None;
            for &method in &methods {
                match method {
                    Method::Oat | Method::Asu => {
                        let r = decompose_multiperiod_with(&model, &panel, &partition, method, None, &asu_config)?;
                        if method == Method::Asu {
                            asu = Some(r.clone());
                        }
                        rows.push((method.into(), r));
                    }
                    Method::Su => {
                        for order in &orders {
                            let r = decompose_multiperiod_with(
                                &model,
                                &panel,
                                &partition,
                                method,
                                Some(order),
                                &asu_config,
                            )?;
                            su_results.push(r.clone());
                            rows.push((ReportMethod::Su, r));
                        }
                    }
                }
            }
            if all_orders && !su_results.is_empty() {
                let n = su_results.len() as f64;
                let mean: Vec<f64> = (0..model.factors().len())
                    .map(|f| exact_sum(su_results.iter().map(|r| r.contributions[f])) / n)
                    .collect();
                let reference = match asu {
                    Some(r) => r,
                    None => decompose_multiperiod_with(&model, &panel, &partition, Method::Asu, None, &asu_config)?,
                };
                let scale = reference
                    .contributions
                    .iter()
                    .fold(reference.delta_p.abs(), |m, c| m.max(c.abs()));
                for (f, (a, b)) in mean.iter().zip(&reference.contributions).enumerate() {
                    if !rel_close(*a, *b, scale, ASU_CHECK_TOLERANCE) {
                        return Err(AttribError::Precondition(format!(
                            "{year} {granularity}: mean of SU orders {a} differs from ASU {b} for {}",
                            reference.factors[f]
                        )));
                    }
                }
                let check = AttributionResult {
                    method: Method::Asu,
                    permutation: None,
                    contributions: mean,
                    unexplained: 0.0,
                    ..reference
                };
                rows.push((ReportMethod::AsuCheck, check));
            }
            Ok(Job {
                year,
                granularity,
                rows,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let factors = config.model.factor_names();
    let mut table = YearlyAttributionTable::new(factors.clone(), config.nominal)?;
    for job in &jobs {
        for (label, r) in &job.rows {
            table.push_labeled(job.year, job.granularity, *label, r)?;
        }
    }
    let diagnostics = diagnostics(&jobs, &factors, &years, first)?;
    Ok(RunReport { table, diagnostics })
}

fn diagnostics(
    jobs: &[Job],
    factors: &[FactorId],
    years: &[(chrono::NaiveDate, chrono::NaiveDate)],
    first_year: i32,
) -> Result<Vec<Diagnostic>> {
    let mut out = Vec::new();
    let pick = |job: &Job, label: ReportMethod| -> Vec<AttributionResult> {
        job.rows
            .iter()
            .filter(|(l, _)| *l == label)
            .map(|(_, r)| r.clone())
            .collect()
    };
    for job in jobs {
        if let Some(oat) = pick(job, ReportMethod::Oat).first() {
            out.push(Diagnostic {
                statistic: "oat_unexplained",
                year: Some(job.year),
                granularity: Some(job.granularity),
                factor: None,
                value: oat.unexplained,
            });
        }
        let su = pick(job, ReportMethod::Su);
        if !su.is_empty() && permutation_range(&su, &factors[0]).is_ok() {
            for f in factors {
                out.push(Diagnostic {
                    statistic: "permutation_range",
                    year: Some(job.year),
                    granularity: Some(job.granularity),
                    factor: Some(f.clone()),
                    value: permutation_range(&su, f)?,
                });
            }
        }
    }
    let mut granularities: Vec<Granularity> = jobs.iter().map(|j| j.granularity).collect();
    granularities.sort();
    granularities.dedup();
    for g in granularities {
        let oat: Vec<AttributionResult> = jobs
            .iter()
            .filter(|j| j.granularity == g)
            .flat_map(|j| pick(j, ReportMethod::Oat))
            .collect();
        if !oat.is_empty() {
            out.push(Diagnostic {
                statistic: "mean_abs_unexplained",
                year: None,
                granularity: Some(g),
                factor: None,
                value: mean_abs_unexplained(&oat)?,
            });
        }
    }
    for year in (first_year..).take(years.len()) {
        let asu: Vec<(Granularity, AttributionResult)> = jobs
            .iter()
            .filter(|j| j.year == year)
            .flat_map(|j| pick(j, ReportMethod::Asu).into_iter().map(move |r| (j.granularity, r)))
            .collect();
        if asu.len() == Granularity::ALL.len() {
            for f in factors {
                out.push(Diagnostic {
                    statistic: "granularity_sensitivity",
                    year: Some(year),
                    granularity: None,
                    factor: Some(f.clone()),
                    value: granularity_sensitivity(&asu, f)?,
                });
            }
        }
    }
    Ok(out)
}

/// Writes diagnostics as `statistic,year,granularity,factor,value_pct,value_raw`.
pub fn emit_diagnostics<W: Write>(diagnostics: &[Diagnostic], nominal: f64, mut sink: W) -> Result<()> {
    writeln!(sink, "statistic,year,granularity,factor,value_pct,value_raw")?;
    for d in diagnostics {
        writeln!(
            sink,
            "{},{},{},{},{:.6},{:.6}",
            d.statistic,
            d.year.map(|y| y.to_string()).unwrap_or_default(),
            d.granularity.map(|g| g.to_string()).unwrap_or_default(),
            d.factor.as_ref().map(|f| f.to_string()).unwrap_or_default(),
            d.value / nominal * 100.0,
            d.value,
        )?;
    }
    Ok(())
}

fn subtable(table: &YearlyAttributionTable, year: i32, method: ReportMethod) -> Result<YearlyAttributionTable> {
    let mut t = YearlyAttributionTable::new(table.factors().to_vec(), table.nominal())?;
    for r in table.rows().iter().filter(|r| r.year == year && r.method == method) {
        t.push(r.clone())?;
    }
    Ok(t)
}

/// Renders the report files as `(file name, bytes)` pairs.
pub fn render(report: &RunReport, layout: Layout) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    match layout {
        Layout::Combined => {
            let mut wide = Vec::new();
            emit_table(&report.table, &mut wide)?;
            files.push(("attribution.csv".to_string(), wide));
            let mut long = Vec::new();
            emit_long(&report.table, &mut long)?;
            files.push(("attribution_long.csv".to_string(), long));
        }
        Layout::Split => {
            let mut keys: Vec<(i32, ReportMethod)> = report.table.rows().iter().map(|r| (r.year, r.method)).collect();
            keys.sort();
            keys.dedup();
            for (year, method) in keys {
                let mut bytes = Vec::new();
                emit_table(&subtable(&report.table, year, method)?, &mut bytes)?;
                files.push((
                    format!("attribution_{year}_{}.csv", method.label().to_ascii_lowercase()),
                    bytes,
                ));
            }
        }
    }
    let mut diag = Vec::new();
    emit_diagnostics(&report.diagnostics, report.table.nominal(), &mut diag)?;
    files.push(("diagnostics.csv".to_string(), diag));
    Ok(files)
}

/// Writes every file under a temporary name first and renames only once all
/// writes succeeded, so a failed run leaves no partial reports.
pub fn write_atomically(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let result = (|| -> Result<()> {
        for (name, bytes) in files {
            let tmp = dir.join(format!(".{name}.tmp"));
            staged.push((tmp.clone(), dir.join(name)));
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        Ok(())
    })();
    if let Err(e) = result {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
        return Err(e);
    }
    let mut written = Vec::new();
    for (tmp, target) in staged {
        fs::rename(&tmp, &target)?;
        written.push(target);
    }
    Ok(written)
}

/// Computes the report for `config` and writes it to its output directory.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let report = compute(config)?;
    let files = render(&report, config.layout)?;
    write_atomically(&config.output_dir, &files)
}
