//! Scenario files, the built-in scenario registry, the check pipeline and
//! run reports on top of `brstq-core`.

pub mod config;
pub mod grammar;
pub mod pipeline;
pub mod registry;
pub mod report;

pub use config::{ScenarioConfig, Stage};
pub use pipeline::{run_scenario, RunOptions};
pub use report::{Format, Report, Status};
