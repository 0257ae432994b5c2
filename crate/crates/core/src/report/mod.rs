//! Table rendering, plot data, report documents and the regression gate.

mod document;
mod gate;
mod plot;
mod table;

pub use document::{
    sha256_hex, InputDigest, Metadata, ReportDocument, Section, SeriesDocument, SERIES_SCHEMA, TOOL_VERSION,
};
pub use gate::{regression_gate, GateOutcome, GatePolicy, GateRecord, EXIT_GATE_VIOLATION};
pub use plot::{
    five_number_summary, quantile_sorted, scaling_curve, thread_scaling, timestep_box, FiveNumberSummary,
    PlotKind, MIN_BOX_POINTS,
};
pub use table::{
    bandwidth_table, ratio_table, render_table, Cell, Extreme, RenderOptions, Table, TableStyle,
    BANDWIDTH_DECIMALS, DEFAULT_MARKER, SECONDS_DECIMALS,
};
