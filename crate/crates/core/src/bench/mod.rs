//! Seeded experiment harness: random k-SAT sweeps, the channel-allocation
//! case study, and stopping-time statistics.

mod case_study;
mod record;
mod stats;
mod sweep;

pub use case_study::{case_study, CaseStudyConfig, CaseStudyResult};
pub use record::{read_csv, write_csv, CsvSink, TrialRecord, CSV_HEADER};
pub use stats::{
    ccdf, group, nearest_rank, quantile, summarize, summarize_point, PointSummary, Quantile,
};
pub use sweep::{collect_sweep, presets, run_seed, run_sweep, GridPoint, SolverSpec, SweepConfig};
