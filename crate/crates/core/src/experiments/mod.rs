//! Test functions, error metrics and the registry of named experiments.
//!
//! Each registry entry is a parameterized run producing one report row per
//! (node set, method, shape parameter).

mod functions;
mod metrics;
mod registry;
mod run;

pub use functions::{
    ackley2d, ackley2d_classic, franke2d, franke2d_classic, poly9_2d, TestFunction,
};
pub use metrics::{metrics, metrics_opt, ErrorSummary};
pub use registry::{
    default_patches_per_axis, linspace, logspace, lookup, registry, Case, EvalSpec, ExperimentSpec,
    Method, NodeSpec, LEBESGUE_RUNS, REGISTRY_NAMES,
};
pub use run::{
    format_float, lebesgue_curves, row_record, run, write_csv, ExperimentReport, LebesgueCurve,
    Row, RunOptions, CSV_HEADER,
};
