//! Experiment runner behind the `keycrit` command.

pub mod error;
pub mod experiments;
pub mod params;
pub mod render;
pub mod report;
pub mod sweep;

pub use error::{CliError, CliResult};
pub use experiments::{run, EXPERIMENTS};
pub use render::{render, Format};
pub use report::{ExperimentReport, Status, Verdict};
