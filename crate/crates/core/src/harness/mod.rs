//! Experiment orchestration: configuration, scenario runs, sweeps,
//! benchmarks and report files.

pub mod config;
pub mod report;
mod run;

pub use config::{AllocationChannel, AllocatorKind, LowFidelitySpec, ScenarioConfig, SiteConfig};
pub use report::emit_reports;
pub use run::{
    benchmark, gain_sweep, replication_seed, run_scenario, sweep, BenchRow, ExperimentResult,
    GainSweepRow, ScenarioLabel, SweepAxis,
};
