//! Scenario construction, experiment arms, the ideal-proportion sweep,
//! multi-trial replication, and statistics.

mod arms;
mod driver;
mod gemini;
mod scenario;
mod stats;
mod sweep;

pub use arms::{run_arm, Arm, ArmSummary, ExperimentError};
pub use driver::{
    run_trial, ArmSetup, SourceSetup, TrialOptions, TrialOutput, TrialResult,
};
pub use gemini::{
    build_gemini, gemini_preset, gemini_topology, GeminiNodes, SchedulePreset, DESK_INTERVAL,
    GEMINI_LOAD_SCALE, PAPER_INTERVAL,
};
pub use scenario::{Scenario, ScenarioError, TrafficSpec};
pub use stats::{
    headroom_fraction, headroom_report, mean, sample_std, std_error, HeadroomReport, HeadroomRow,
};
pub use sweep::{ideal_sweep, sweep_grid, SweepPoint, SweepResult};
