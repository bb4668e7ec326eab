//! Scenario loading, execution and report writing behind the `weaklab` binary.

pub mod builtins;
pub mod report;
pub mod run;
pub mod scenario;

pub use report::{Outcome, RunReport, SuiteReport};
pub use run::{run_regularity, run_scenario, run_suite};
pub use scenario::{ConfigError, Scenario, Suite};
