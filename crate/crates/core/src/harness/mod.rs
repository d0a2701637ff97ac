//! Parameter sweeps and figure data.
//!
//! Everything written here is deterministic: the same configuration and seed
//! give byte-identical files whatever the worker count. The one exception is
//! `timings.csv`, which records wall-clock time per computed point.

mod figures;
mod output;
mod sweep;

pub use figures::{emit_figure_data, FigureId, FigureParams};
pub use output::{config_hash, fmt_num, write_atomic, Cell, CsvTable, VERSION};
pub use sweep::{
    compute_point, doubling_range, run_sweep, PointFailure, SweepOutcome, SweepPlan, SweepRecord,
};
