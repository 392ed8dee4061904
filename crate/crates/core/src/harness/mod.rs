//! Config-driven Monte Carlo sweeps and their reports.
//!
//! A run expands `sizes x seeds` (or `seeds x replicates` for the swap
//! diagnostic) into independent records, evaluates them on a bounded worker
//! pool, sorts them by `(size, seed)` and reduces them into per-size
//! aggregates. `report.json` holds everything except wall-clock timings,
//! which go to `timings.json`, so identical configs give identical reports.

mod config;
mod qq;
mod report;
mod run;

pub use config::{
    AssertionConfig, DerivativeConfig, DiagnosticsConfig, EnsembleConfig, EnsembleKind, ExperimentConfig,
    GeneratorConfig, InterpolationConfig, LimitConfig, MetricsConfig, OutputConfig, PerturbationConfig, Statistic,
    SwapConfig, SCHEMA_VERSION,
};
pub use qq::{qq_against, qq_data, qq_max_gap, step_quantile, write_qq_csv};
pub use report::{aggregate, Aggregate, AssertionOutcome, Record, RecordTiming, RunReport, Timings, TOOL_VERSION};
pub use run::{run, RunOutcome, Verb, ATOM_THRESHOLD, PARTIALS_TOL, SCALING_RANGE, SWAP_RESIDUAL_TOL};
