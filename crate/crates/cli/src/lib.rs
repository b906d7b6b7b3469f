//! Experiment harness behind the `qgeo` binary: connecting frames read from
//! files, distance-to-geodesic curves, length-deviation tables and timings.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_bench, cmd_connect, cmd_figure1, cmd_table1, CurveKind};
pub use config::{parse_distance, parse_distances, parse_p_range, ExperimentConfig, Format};
pub use error::CliError;
pub use report::ExperimentReport;
