//! Scenario-driven front end for the `fairshare-core` engines.

pub mod app;
pub mod empirical;
pub mod error;
pub mod report;
pub mod scenario;
pub mod solve;
pub mod sweep;

pub use error::{CliError, Violation};
pub use scenario::{parse_scenario, Scenario};
pub use solve::{solve, SolveOptions, SolveReport};
