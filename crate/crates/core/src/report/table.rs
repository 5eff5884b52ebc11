//! Yearly attribution tables and their comma-separated emission.

use std::cmp::Ordering;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::data::Granularity;
use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::result::{AttributionResult, Method};
use crate::sum::exact_sum;

/// Row label: a decomposition method, or the cross-check average of all SU
/// orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReportMethod {
    Oat,
    Su,
    Asu,
    AsuCheck,
}

impl ReportMethod {
    pub fn label(self) -> &'static str {
        match self {
            ReportMethod::Oat => "OAT",
            ReportMethod::Su => "SU",
            ReportMethod::Asu => "ASU",
            ReportMethod::AsuCheck => "ASU-check",
        }
    }
}

impl From<Method> for ReportMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Oat => ReportMethod::Oat,
            Method::Su => ReportMethod::Su,
            Method::Asu => ReportMethod::Asu,
        }
    }
}

impl fmt::Display for ReportMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ReportMethod {
    type Err = AttribError;

    fn from_str(s: &str) -> Result<Self> {
        [
            ReportMethod::Oat,
            ReportMethod::Su,
            ReportMethod::Asu,
            ReportMethod::AsuCheck,
        ]
        .into_iter()
        .find(|m| m.label() == s)
        .ok_or_else(|| AttribError::input(format!("unknown report method '{s}'")))
    }
}

/// One decomposition in raw model units.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub year: i32,
    pub granularity: Granularity,
    pub method: ReportMethod,
    pub order: Option<Vec<FactorId>>,
    pub contributions: Vec<f64>,
    pub unexplained: f64,
    pub delta_p: f64,
}

/// Attribution rows keyed by (year, granularity, method, order), with one
/// contribution column per factor.
///
/// Values are held in model units; emission adds percentage-point columns
/// (`value / nominal * 100`).
#[derive(Debug, Clone, PartialEq)]
pub struct YearlyAttributionTable {
    factors: Vec<FactorId>,
    nominal: f64,
    rows: Vec<TableRow>,
}

/// Relative tolerance of the row identity `sum(contributions) + unexplained = delta_p`.
pub const ROW_TOLERANCE: f64 = 1e-10;

impl YearlyAttributionTable {
    pub fn new(factors: Vec<FactorId>, nominal: f64) -> Result<Self> {
        if !(nominal > 0.0 && nominal.is_finite()) {
            return Err(AttribError::input(format!("nominal must be positive, got {nominal}")));
        }
        Ok(YearlyAttributionTable {
            factors,
            nominal,
            rows: Vec::new(),
        })
    }

    pub fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    pub fn nominal(&self) -> f64 {
        self.nominal
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_percent(&self, value: f64) -> f64 {
        value / self.nominal * 100.0
    }

    /// Adds a row after checking its shape and its p&l identity.
    pub fn push(&mut self, row: TableRow) -> Result<()> {
        if row.contributions.len() != self.factors.len() {
            return Err(AttribError::input(format!(
                "row has {} contributions, table has {} factors",
                row.contributions.len(),
                self.factors.len()
            )));
        }
        if let Some(order) = &row.order {
            if let Some(f) = order.iter().find(|f| !self.factors.contains(f)) {
                return Err(AttribError::UnknownFactor(f.to_string()));
            }
        }
        let pct: Vec<f64> = row.contributions.iter().map(|&c| self.to_percent(c)).collect();
        let (u, dp) = (self.to_percent(row.unexplained), self.to_percent(row.delta_p));
        let total = exact_sum(pct.iter().copied().chain([u]));
        let scale = pct.iter().chain([&u, &dp]).fold(0.0f64, |m, v| m.max(v.abs()));
        if (total - dp).abs() > ROW_TOLERANCE * scale {
            return Err(AttribError::Precondition(format!(
                "row {} {} {}: contributions {total} do not add up to {dp}",
                row.year, row.granularity, row.method
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds a decomposition result; contributions are matched to table
    /// columns by factor name.
    pub fn push_result(&mut self, year: i32, granularity: Granularity, result: &AttributionResult) -> Result<()> {
        self.push_labeled(year, granularity, result.method.into(), result)
    }

    pub fn push_labeled(
        &mut self,
        year: i32,
        granularity: Granularity,
        method: ReportMethod,
        result: &AttributionResult,
    ) -> Result<()> {
        let contributions = self
            .factors
            .iter()
            .map(|f| {
                result
                    .contribution(f)
                    .ok_or_else(|| AttribError::UnknownFactor(f.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.push(TableRow {
            year,
            granularity,
            method,
            order: result.permutation.clone(),
            contributions,
            unexplained: result.unexplained,
            delta_p: result.delta_p,
        })
    }

    fn order_key(&self, order: &Option<Vec<FactorId>>) -> Vec<usize> {
        order
            .iter()
            .flatten()
            .map(|f| self.factors.iter().position(|g| g == f).unwrap_or(usize::MAX))
            .collect()
    }

    fn compare(&self, a: &TableRow, b: &TableRow) -> Ordering {
        (a.year, a.granularity, a.method)
            .cmp(&(b.year, b.granularity, b.method))
            .then_with(|| self.order_key(&a.order).cmp(&self.order_key(&b.order)))
    }

    /// Rows in canonical order: year, granularity (coarse to fine), method,
    /// then update order by factor position.
    pub fn sorted_rows(&self) -> Vec<&TableRow> {
        let mut rows: Vec<&TableRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| self.compare(a, b));
        rows
    }

    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["year", "granularity", "method", "order"].map(String::from).to_vec();
        h.extend(self.factors.iter().map(|f| format!("{f}_pct")));
        h.push("unexplained_pct".into());
        h.push("delta_p_pct".into());
        h.extend(self.factors.iter().map(|f| format!("{f}_raw")));
        h.push("unexplained_raw".into());
        h.push("delta_p_raw".into());
        h
    }
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn order_label(order: &Option<Vec<FactorId>>) -> String {
    order
        .iter()
        .flatten()
        .map(FactorId::as_str)
        .collect::<Vec<_>>()
        .join(" ")
}

fn io_err(e: csv::Error) -> AttribError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AttribError::Io(io),
        other => AttribError::input(format!("{other:?}")),
    }
}

/// Writes the table as sorted comma-separated text with six decimals.
/// Identical tables produce identical bytes.
pub fn emit_table<W: Write>(table: &YearlyAttributionTable, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(sink);
    w.write_record(table.header()).map_err(io_err)?;
    for row in table.sorted_rows() {
        let mut rec = vec![
            row.year.to_string(),
            row.granularity.to_string(),
            row.method.to_string(),
            order_label(&row.order),
        ];
        rec.extend(row.contributions.iter().map(|&c| fixed(table.to_percent(c))));
        rec.push(fixed(table.to_percent(row.unexplained)));
        rec.push(fixed(table.to_percent(row.delta_p)));
        rec.extend(row.contributions.iter().map(|&c| fixed(c)));
        rec.push(fixed(row.unexplained));
        rec.push(fixed(row.delta_p));
        w.write_record(&rec).map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one line per (row, factor) in long format for plotting; the
/// residual appears under the pseudo-factor `unexplained`.
pub fn emit_long<W: Write>(table: &YearlyAttributionTable, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(sink);
    w.write_record([
        "year",
        "granularity",
        "method",
        "order",
        "factor",
        "value_pct",
        "value_raw",
    ])
    .map_err(io_err)?;
    for row in table.sorted_rows() {
        let series = table
            .factors
            .iter()
            .map(FactorId::as_str)
            .zip(row.contributions.iter().copied())
            .chain([("unexplained", row.unexplained)]);
        for (name, v) in series {
            w.write_record([
                row.year.to_string(),
                row.granularity.to_string(),
                row.method.to_string(),
                order_label(&row.order),
                name.to_string(),
                fixed(table.to_percent(v)),
                fixed(v),
            ])
            .map_err(io_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Parses text written by [`emit_table`], reading the raw-unit columns.
pub fn parse_table<R: Read>(source: R, nominal: f64) -> Result<YearlyAttributionTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let header = reader.headers().map_err(io_err)?.clone();
    let n = header.len();
    if n < 10 || (n - 8) % 2 != 0 {
        return Err(AttribError::input("not an attribution table header"));
    }
    let d = (n - 8) / 2;
    let factors = (0..d)
        .map(|i| {
            header[4 + i]
                .strip_suffix("_pct")
                .ok_or_else(|| AttribError::input(format!("unexpected column '{}'", &header[4 + i])))
                .and_then(FactorId::new)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = YearlyAttributionTable::new(factors.clone(), nominal)?;
    let raw = 4 + d + 2;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(io_err)?;
        let bad = |col: &str| AttribError::Data {
            row: line + 2,
            column: col.to_string(),
            message: "unparsable cell".into(),
        };
        let num = |i: usize| record[i].parse::<f64>().map_err(|_| bad(&header[i]));
        let order = if record[3].is_empty() {
            None
        } else {
            Some(record[3].split(' ').map(FactorId::new).collect::<Result<Vec<_>>>()?)
        };
        table.rows.push(TableRow {
            year: record[0].parse().map_err(|_| bad("year"))?,
            granularity: record[1].parse()?,
            method: record[2].parse()?,
            order,
            contributions: (0..d).map(|i| num(raw + i)).collect::<Result<Vec<_>>>()?,
            unexplained: num(raw + d)?,
            delta_p: num(raw + d + 1)?,
        });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_ids;

    fn row(year: i32, method: ReportMethod, order: Option<&[&str]>) -> TableRow {
        TableRow {
            year,
            granularity: Granularity::Monthly,
            method,
            order: order.map(factor_ids),
            contributions: vec![0.01, -0.02],
            unexplained: 0.0,
            delta_p: -0.01,
        }
    }

    fn text(t: &YearlyAttributionTable) -> String {
        let mut out = Vec::new();
        emit_table(t, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = YearlyAttributionTable::new(factor_ids(&["IR", "FX"]), 1.0).unwrap();
        assert_eq!(
            text(&t),
            "year,granularity,method,order,IR_pct,FX_pct,unexplained_pct,delta_p_pct,IR_raw,FX_raw,unexplained_raw,delta_p_raw\n"
        );
    }

    #[test]
    fn one_row_two_lines() {
        let mut t = YearlyAttributionTable::new(factor_ids(&["IR", "FX"]), 1.0).unwrap();
        t.push(row(2003, ReportMethod::Asu, None)).unwrap();
        let s = text(&t);
        assert_eq!(s.lines().count(), 2);
        assert_eq!(
            s.lines().nth(1).unwrap(),
            "2003,monthly,ASU,,1.000000,-2.000000,0.000000,-1.000000,0.010000,-0.020000,0.000000,-0.010000"
        );
        assert_eq!(text(&t), s);
    }

    #[test]
    fn sorted_output() {
        let mut t = YearlyAttributionTable::new(factor_ids(&["IR", "FX"]), 1.0).unwrap();
        t.push(row(2004, ReportMethod::Oat, None)).unwrap();
        t.push(row(2003, ReportMethod::Su, Some(&["FX", "IR"]))).unwrap();
        t.push(row(2003, ReportMethod::Su, Some(&["IR", "FX"]))).unwrap();
        t.push(row(2003, ReportMethod::Oat, None)).unwrap();
        let labels: Vec<String> = t
            .sorted_rows()
            .iter()
            .map(|r| format!("{} {} {}", r.year, r.method, order_label(&r.order)))
            .collect();
        assert_eq!(labels, ["2003 OAT ", "2003 SU IR FX", "2003 SU FX IR", "2004 OAT "]);
    }

    #[test]
    fn rejects_inconsistent_rows() {
        let mut t = YearlyAttributionTable::new(factor_ids(&["IR", "FX"]), 1.0).unwrap();
        let mut r = row(2003, ReportMethod::Asu, None);
        r.delta_p = 0.5;
        assert!(t.push(r).is_err());
        let mut r = row(2003, ReportMethod::Asu, None);
        r.contributions.pop();
        assert!(t.push(r).is_err());
        assert!(YearlyAttributionTable::new(factor_ids(&["IR"]), 0.0).is_err());
    }

    #[test]
    fn parse_back() {
        let mut t = YearlyAttributionTable::new(factor_ids(&["IR", "FX"]), 1.0).unwrap();
        t.push(row(2003, ReportMethod::Su, Some(&["FX", "IR"]))).unwrap();
        t.push(row(2003, ReportMethod::AsuCheck, None)).unwrap();
        let parsed = parse_table(text(&t).as_bytes(), 1.0).unwrap();
        assert_eq!(parsed.factors(), t.factors());
        assert_eq!(parsed.rows().len(), 2);
        assert_eq!(parsed.rows()[0].order, Some(factor_ids(&["FX", "IR"])));
        assert_eq!(parsed.rows()[1].method, ReportMethod::AsuCheck);
    }

    #[test]
    fn long_format() {
        let mut t = YearlyAttributionTable::new(factor_ids(&["IR", "FX"]), 1.0).unwrap();
        t.push(row(2003, ReportMethod::Oat, None)).unwrap();
        let mut out = Vec::new();
        emit_long(&t, &mut out).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s.lines().count(), 4);
        assert!(s.contains("2003,monthly,OAT,,unexplained,0.000000,0.000000"));
    }
}
