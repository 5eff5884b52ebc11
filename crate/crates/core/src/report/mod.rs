//! Diagnostic statistics over attribution results and report emission.

mod stats;
mod table;

pub use stats::{granularity_sensitivity, mean_abs_unexplained, permutation_range};
pub use table::{emit_long, emit_table, parse_table, ReportMethod, TableRow, YearlyAttributionTable, ROW_TOLERANCE};
