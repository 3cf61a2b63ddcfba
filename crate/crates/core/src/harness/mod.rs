//! Experiment drivers: Monte-Carlo SNR sweeps, exhaustive verification of
//! the optimality results, result emission, and the command-line front end.

pub mod cli;
mod config;
mod sweep;
mod verify;

pub use config::{Budget, ConfigError, ExperimentConfig, OutputFormat, SnrGrid, TopologySpec};
pub use sweep::{run_snr_sweep, write_sweep, SweepRow, HAZARD_FLAG_RATE};
pub use verify::{
    verify_daisy_optimality, verify_star_optimality, verify_time_bounds, DaisyEntry,
    DaisyOptimalityReport, ExhaustiveDaisyCheck, StarOptimalityReport, TimeBoundsReport,
};
