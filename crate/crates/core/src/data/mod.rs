//! Panel ingestion, calendar partitioning and synthetic paths.

mod calendar;
mod csv_io;
mod synth;

pub use calendar::{business_years, make_partition, Granularity};
pub use csv_io::{read_panel, read_panel_with, write_panel, ReadOptions};
pub use synth::{generate_synthetic_panel, FactorWalk, SyntheticSpec, WalkKind};
