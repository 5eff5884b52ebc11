//! Reporting periods and their partition into calendar sub-intervals.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Days, Months, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{AttribError, Result};
use crate::panel::{PartitionSpec, RiskFactorPanel};

/// Sub-interval size for the multi-period recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Annual,
    Quarterly,
    Monthly,
    Weekly,
    Daily,
}

impl Granularity {
    pub const ALL: [Granularity; 5] = [
        Granularity::Annual,
        Granularity::Quarterly,
        Granularity::Monthly,
        Granularity::Weekly,
        Granularity::Daily,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Granularity::Annual => "annual",
            Granularity::Quarterly => "quarterly",
            Granularity::Monthly => "monthly",
            Granularity::Weekly => "weekly",
            Granularity::Daily => "daily",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Granularity {
    type Err = AttribError;

    fn from_str(s: &str) -> Result<Self> {
        Granularity::ALL
            .into_iter()
            .find(|g| g.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| AttribError::input(format!("unknown granularity '{s}'")))
    }
}

fn last_day_of_month(year: i32, month: u32) -> NaiveDate {
    let first = NaiveDate::from_ymd_opt(year, month, 1).expect("valid month");
    first + Months::new(1) - Days::new(1)
}

/// Calendar sub-period ends strictly inside `(start, end)`.
fn period_ends(granularity: Granularity, start: NaiveDate, end: NaiveDate) -> Vec<NaiveDate> {
    let mut out = Vec::new();
    match granularity {
        Granularity::Daily => {}
        Granularity::Weekly => {
            // ISO weeks end on Sunday
            let ahead = (7 - start.weekday().number_from_monday()) % 7;
            let mut e = start + Days::new(u64::from(if ahead == 0 { 7 } else { ahead }));
            debug_assert_eq!(e.weekday(), Weekday::Sun);
            while e < end {
                out.push(e);
                e = e + Days::new(7);
            }
        }
        Granularity::Annual | Granularity::Quarterly | Granularity::Monthly => {
            let step = match granularity {
                Granularity::Annual => 12,
                Granularity::Quarterly => 3,
                _ => 1,
            };
            // first month whose end can lie after `start`
            let mut year = start.year();
            let mut month = start.month();
            while !month.is_multiple_of(step) {
                month += 1;
            }
            loop {
                let e = last_day_of_month(year, month);
                if e >= end {
                    break;
                }
                if e > start {
                    out.push(e);
                }
                month += step;
                if month > 12 {
                    month -= 12;
                    year += 1;
                }
            }
        }
    }
    out
}

/// Splits `[period_start, period_end]` into sub-intervals at the last panel
/// observation on or before each calendar sub-period end.
///
/// A granularity coarser than the period yields a single interval.
pub fn make_partition(
    panel: &RiskFactorPanel,
    period_start: NaiveDate,
    period_end: NaiveDate,
    granularity: Granularity,
) -> Result<PartitionSpec> {
    if period_start >= period_end {
        return Err(AttribError::input(format!(
            "empty period: {period_start} is not before {period_end}"
        )));
    }
    let first = panel
        .last_index_on_or_before(period_start)
        .ok_or_else(|| AttribError::input(format!("no panel observation on or before {period_start}")))?;
    let last = panel
        .last_index_on_or_before(period_end)
        .expect("an observation precedes period_start");

    let indices: Vec<usize> = if granularity == Granularity::Daily {
        (first..=last).collect()
    } else {
        let mut idx = vec![first];
        for e in period_ends(granularity, period_start, period_end) {
            idx.push(
                panel
                    .last_index_on_or_before(e)
                    .expect("an observation precedes period_start"),
            );
        }
        idx.push(last);
        idx.dedup();
        idx
    };
    if indices.len() < 2 {
        return Err(AttribError::input(format!(
            "no panel observations between {period_start} and {period_end}"
        )));
    }
    PartitionSpec::new(indices.into_iter().map(|i| panel.dates()[i]).collect())
}

/// `(start, end)` valuation dates of each calendar year in
/// `first_year..=last_year`: the last observations on or before Dec 31 of
/// the previous and of the current year.
pub fn business_years(panel: &RiskFactorPanel, first_year: i32, last_year: i32) -> Result<Vec<(NaiveDate, NaiveDate)>> {
    if first_year > last_year {
        return Err(AttribError::input(format!(
            "year range {first_year}..{last_year} is empty"
        )));
    }
    (first_year..=last_year)
        .map(|year| {
            let not_covered = || AttribError::input(format!("panel does not cover business year {year}"));
            let prev_end = NaiveDate::from_ymd_opt(year - 1, 12, 31).ok_or_else(not_covered)?;
            let year_end = NaiveDate::from_ymd_opt(year, 12, 31).ok_or_else(not_covered)?;
            let start = panel.last_index_on_or_before(prev_end).ok_or_else(not_covered)?;
            let end = panel.last_index_on_or_before(year_end).ok_or_else(not_covered)?;
            let (start, end) = (panel.dates()[start], panel.dates()[end]);
            // the closing valuation must fall in December of the year
            if end <= start || end.year() != year || end.month() != 12 {
                return Err(not_covered());
            }
            Ok((start, end))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_ids;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    /// Weekday panel over [from, to].
    fn weekday_panel(from: &str, to: &str) -> RiskFactorPanel {
        let mut dates = Vec::new();
        let mut t = d(from);
        while t <= d(to) {
            if t.weekday().number_from_monday() <= 5 {
                dates.push(t);
            }
            t = t + Days::new(1);
        }
        let rows = dates.iter().map(|_| vec![1.0]).collect();
        RiskFactorPanel::new(factor_ids(&["FX"]), dates, rows).unwrap()
    }

    #[test]
    fn annual_and_quarterly() {
        let p = weekday_panel("2002-12-02", "2004-01-30");
        let (s, e) = (d("2002-12-31"), d("2003-12-31"));
        let annual = make_partition(&p, s, e, Granularity::Annual).unwrap();
        assert_eq!(annual.boundaries(), &[s, e]);
        let q = make_partition(&p, s, e, Granularity::Quarterly).unwrap();
        assert_eq!(
            q.boundaries(),
            &[s, d("2003-03-31"), d("2003-06-30"), d("2003-09-30"), e]
        );
        assert_eq!(make_partition(&p, s, e, Granularity::Monthly).unwrap().len(), 12);
    }

    #[test]
    fn weekend_period_ends_roll_back() {
        let p = weekday_panel("2002-12-02", "2004-01-30");
        let m = make_partition(&p, d("2002-12-31"), d("2003-12-31"), Granularity::Monthly).unwrap();
        // 2003-05-31 is a Saturday
        assert!(m.boundaries().contains(&d("2003-05-30")));
        assert!(m.boundaries().iter().all(|b| p.date_index(*b).is_ok()));
    }

    #[test]
    fn weekly_uses_sundays() {
        let p = weekday_panel("2003-01-01", "2003-02-28");
        let w = make_partition(&p, d("2003-01-06"), d("2003-01-31"), Granularity::Weekly).unwrap();
        // Fridays before each Sunday, then the period end
        assert_eq!(
            w.boundaries(),
            &[
                d("2003-01-06"),
                d("2003-01-10"),
                d("2003-01-17"),
                d("2003-01-24"),
                d("2003-01-31")
            ]
        );
    }

    #[test]
    fn daily_uses_every_panel_date() {
        let p = weekday_panel("2002-12-02", "2004-01-30");
        let daily = make_partition(&p, d("2002-12-31"), d("2003-12-31"), Granularity::Daily).unwrap();
        let expected: Vec<NaiveDate> = p
            .dates()
            .iter()
            .copied()
            .filter(|t| *t >= d("2002-12-31") && *t <= d("2003-12-31"))
            .collect();
        assert_eq!(daily.boundaries(), &expected[..]);
        assert_eq!(daily.len(), expected.len() - 1);
    }

    #[test]
    fn coarse_granularity_degenerates() {
        let p = weekday_panel("2003-01-01", "2003-03-31");
        let a = make_partition(&p, d("2003-01-31"), d("2003-02-28"), Granularity::Annual).unwrap();
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn partition_errors() {
        let p = weekday_panel("2003-01-01", "2003-03-31");
        assert!(make_partition(&p, d("2003-02-01"), d("2003-02-01"), Granularity::Monthly).is_err());
        assert!(make_partition(&p, d("2002-06-01"), d("2003-02-01"), Granularity::Monthly).is_err());
        // Saturday to Sunday: both resolve to the same Friday
        assert!(make_partition(&p, d("2003-01-04"), d("2003-01-05"), Granularity::Daily).is_err());
    }

    #[test]
    fn business_year_pairs() {
        let p = weekday_panel("2002-12-02", "2022-12-31");
        let years = business_years(&p, 2003, 2022).unwrap();
        assert_eq!(years.len(), 20);
        assert_eq!(years[0], (d("2002-12-31"), d("2003-12-31")));
        assert!(years.windows(2).all(|w| w[0].1 == w[1].0));
        // 2022-12-31 is a Saturday
        assert_eq!(years[19].1, d("2022-12-30"));
        assert_eq!(business_years(&p, 2010, 2010).unwrap().len(), 1);
    }

    #[test]
    fn business_year_span_errors() {
        let p = weekday_panel("2004-01-01", "2005-12-31");
        assert!(business_years(&p, 2003, 2003).is_err());
        assert!(business_years(&p, 2005, 2006).is_err());
        assert!(business_years(&p, 2005, 2004).is_err());
    }

    #[test]
    fn granularity_parsing() {
        assert_eq!("Monthly".parse::<Granularity>().unwrap(), Granularity::Monthly);
        assert!("hourly".parse::<Granularity>().is_err());
    }
}
