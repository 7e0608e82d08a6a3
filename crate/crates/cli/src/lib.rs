//! File formats, scenario presets, the measurement matrix runner and the
//! analysis pipeline around `pqshake-core`.

pub mod algorithms;
pub mod analyze;
pub mod checks;
pub mod plot;
pub mod runconfig;
pub mod runner;
pub mod scenario;

pub use algorithms::{parse_algorithms, AlgorithmsFile};
pub use runconfig::RunnerConfig;
pub use scenario::{parse_scenario, write_presets, ScenarioError, ScenarioRow};
