//! Parameter sweeps, table output and the self-check suite used by the CLI.

pub mod config;
pub mod output;
pub mod sweep;
pub mod verify;

pub use config::{parse_config, Grid, NoiseKind, Quantity, SweepConfig};
pub use output::{emit_csv, emit_svg, format_number, Cell, Table};
pub use sweep::{
    cascade_column, fig2_preset, fig2_preset_with_threads, run_sweep, run_sweep_with_threads, Point,
    SweepRow, FIG2_R_VALUES,
};
pub use verify::{run_checks, CheckOutcome};
