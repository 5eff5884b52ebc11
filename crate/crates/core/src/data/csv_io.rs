use std::io::{Read, Write};

use chrono::NaiveDate;

use crate::error::{AttribError, Result};
use crate::factor::FactorId;
use crate::panel::RiskFactorPanel;

/// Options for [`read_panel_with`].
#[derive(Debug, Clone, Default)]
pub struct ReadOptions {
    /// Columns quoted in percent; their values are divided by 100.
    pub percent_columns: Vec<String>,
    /// Fill empty cells with the previous row's value. Off by default.
    pub forward_fill: bool,
}

/// Reads a panel in the canonical format: a `date` column followed by one
/// column per factor, ISO-8601 dates and plain decimal numbers.
pub fn read_panel<R: Read>(source: R) -> Result<RiskFactorPanel> {
    read_panel_with(source, &ReadOptions::default())
}

pub fn read_panel_with<R: Read>(source: R, options: &ReadOptions) -> Result<RiskFactorPanel> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.len() < 2 {
        return Err(data_err(
            1,
            "header",
            "expected a date column and at least one factor column",
        ));
    }
    if !header[0].eq_ignore_ascii_case("date") {
        return Err(data_err(1, &header[0], "first column must be 'date'"));
    }
    let factors = header
        .iter()
        .skip(1)
        .map(FactorId::new)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| data_err(1, "header", &e.to_string()))?;
    for name in &options.percent_columns {
        if !factors.iter().any(|f| f.as_str() == name) {
            return Err(AttribError::UnknownFactor(name.clone()));
        }
    }
    let percent: Vec<bool> = factors
        .iter()
        .map(|f| options.percent_columns.iter().any(|p| p == f.as_str()))
        .collect();

    let mut rows: Vec<(NaiveDate, Vec<f64>, usize)> = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    for record in reader.records() {
        let line = record
            .as_ref()
            .ok()
            .and_then(|r| r.position())
            .map_or(0, |p| p.line() as usize);
        let record = record.map_err(|e| csv_error(e, line))?;
        if record.len() != header.len() {
            return Err(data_err(
                line,
                "row",
                &format!("expected {} cells, found {}", header.len(), record.len()),
            ));
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
            .map_err(|_| data_err(line, "date", &format!("'{}' is not an ISO-8601 date", &record[0])))?;
        let mut values = Vec::with_capacity(factors.len());
        for (i, cell) in record.iter().skip(1).enumerate() {
            let column = factors[i].as_str();
            let value = if cell.is_empty() {
                match (&previous, options.forward_fill) {
                    (Some(prev), true) => prev[i],
                    _ => return Err(data_err(line, column, "missing value")),
                }
            } else {
                let v = parse_number(cell)
                    .ok_or_else(|| data_err(line, column, &format!("'{cell}' is not a decimal number")))?;
                if percent[i] {
                    v / 100.0
                } else {
                    v
                }
            };
            values.push(value);
        }
        previous = Some(values.clone());
        rows.push((date, values, line));
    }

    rows.sort_by_key(|r| r.0);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(data_err(w[1].2, "date", &format!("duplicate date {}", w[1].0)));
    }
    let (dates, values): (Vec<_>, Vec<_>) = rows.into_iter().map(|(d, v, _)| (d, v)).unzip();
    RiskFactorPanel::new(factors, dates, values)
}

/// Plain decimal (optionally signed, optional exponent); no percent signs,
/// thousands separators, or non-finite spellings.
fn parse_number(cell: &str) -> Option<f64> {
    let ok = cell
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    if !ok {
        return None;
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn data_err(row: usize, column: &str, message: &str) -> AttribError {
    AttribError::Data {
        row,
        column: column.to_string(),
        message: message.to_string(),
    }
}

fn csv_error(e: csv::Error, line: usize) -> AttribError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AttribError::Io(io),
        other => data_err(line, "row", &format!("{other:?}")),
    }
}

/// Writes `panel` in the canonical format. Values use the shortest
/// representation that parses back to the same bits.
pub fn write_panel<W: Write>(panel: &RiskFactorPanel, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(sink);
    let mut header = vec!["date".to_string()];
    header.extend(panel.factors().iter().map(|f| f.to_string()));
    w.write_record(&header).map_err(|e| csv_error(e, 0))?;
    for (i, date) in panel.dates().iter().enumerate() {
        let mut rec = vec![date.format("%Y-%m-%d").to_string()];
        rec.extend(panel.row(i).iter().map(|v| format!("{v:?}")));
        w.write_record(&rec).map_err(|e| csv_error(e, i + 2))?;
    }
    w.flush()?;
    Ok(())
}
