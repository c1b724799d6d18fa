//! Sweep configuration, execution and output for the `fdcran` binary.

pub mod config;
pub mod svg;
pub mod sweep;
pub mod table_csv;

pub use config::{BaseConfig, Numerics, SweepRange, SweepSpec, SweepVar};
pub use svg::{emit_svg, render_svg, PlotSpec};
pub use sweep::{run_sweep, verify_table, OracleColumns, Row, Table};
pub use table_csv::{emit_csv, format_sig9, read_csv, write_csv, CsvRow, HEADER};
