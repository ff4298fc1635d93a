//! The experiment arms and multi-trial replication.

use rayon::prelude::*;
use thiserror::Error;

use crate::learning::InteractionMode;

use super::driver::{run_trial, ArmSetup, SourceSetup, TrialOptions, TrialOutput};
use super::scenario::{Scenario, ScenarioError};
use super::stats::{mean, std_error};
use super::sweep::ideal_sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    /// Every node forwards along the routing table.
    BellmanFord,
    /// Sources use the routing table; intermediates run masked splits.
    BfSourceOnly,
    /// Sources hold the best fixed proportions found by the sweep.
    IdealProportions,
    /// Independent learners, own action only.
    StdMbl,
    /// Leader decides first; followers condition on its action.
    LfMbl,
    /// Two groups with half-interval offsets, each conditioning on the
    /// other's action in force.
    IntMbl,
}

impl Arm {
    pub const ALL: [Arm; 6] = [
        Arm::BellmanFord,
        Arm::BfSourceOnly,
        Arm::IdealProportions,
        Arm::StdMbl,
        Arm::LfMbl,
        Arm::IntMbl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Arm::BellmanFord => "bellman_ford",
            Arm::BfSourceOnly => "bf_source_only",
            Arm::IdealProportions => "ideal_proportions",
            Arm::StdMbl => "std_mbl",
            Arm::LfMbl => "lf_mbl",
            Arm::IntMbl => "int_mbl",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Arm::BellmanFord => "Bellman-Ford",
            Arm::BfSourceOnly => "BF source only",
            Arm::IdealProportions => "Ideal Proportions",
            Arm::StdMbl => "STD-MBL",
            Arm::LfMbl => "LF-MBL",
            Arm::IntMbl => "INT-MBL",
        }
    }

    /// Learning-method column for the summary table; baselines have none.
    pub fn learning_method(self) -> Option<&'static str> {
        match self {
            Arm::BellmanFord | Arm::BfSourceOnly | Arm::IdealProportions => None,
            Arm::StdMbl => Some("MBL"),
            Arm::LfMbl => Some("Leader/Follower"),
            Arm::IntMbl => Some("Interleaving"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Arm::ALL.into_iter().find(|a| a.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("headroom report requires the {arm} arm")]
    MissingArm { arm: &'static str },
    #[error("run_arm needs at least one trial")]
    NoTrials,
}

/// Mean total cost over trials with its standard error, plus the per-trial
/// results it was computed from.
#[derive(Debug, Clone)]
pub struct ArmSummary {
    pub arm: Arm,
    pub mean_total_cost: f64,
    pub std_error: f64,
    pub trial_count: u32,
    pub outputs: Vec<TrialOutput>,
    /// Source actions held fixed, for the ideal arm.
    pub fixed_actions: Option<Vec<f64>>,
}

impl ArmSummary {
    pub fn costs(&self) -> Vec<f64> {
        self.outputs.iter().map(|o| o.result.total_cost).collect()
    }
}

pub(crate) fn setup_for(arm: Arm, fixed_actions: Option<Vec<f64>>) -> ArmSetup {
    match arm {
        Arm::BellmanFord => ArmSetup {
            sources: SourceSetup::ShortestPath,
            masked_intermediates: false,
        },
        Arm::BfSourceOnly => ArmSetup {
            sources: SourceSetup::ShortestPath,
            masked_intermediates: true,
        },
        Arm::IdealProportions => ArmSetup {
            sources: SourceSetup::Fixed(fixed_actions.expect("ideal arm needs actions")),
            masked_intermediates: true,
        },
        Arm::StdMbl => ArmSetup {
            sources: SourceSetup::Learning(InteractionMode::Standard),
            masked_intermediates: true,
        },
        Arm::LfMbl => ArmSetup {
            sources: SourceSetup::Learning(InteractionMode::LeaderFollower),
            masked_intermediates: true,
        },
        Arm::IntMbl => ArmSetup {
            sources: SourceSetup::Learning(InteractionMode::Interleaved),
            masked_intermediates: true,
        },
    }
}

/// Runs `trials` independent trials of one arm. Trial `t` seeds its streams
/// from `base_seed + t`, so arms are directly comparable and rerunning an
/// arm reproduces it bit for bit. The ideal-proportions arm first locates
/// the best fixed actions with [`ideal_sweep`], then evaluates them on the
/// trial seeds.
pub fn run_arm(
    arm: Arm,
    scenario: &Scenario,
    trials: u32,
    opts: &TrialOptions,
) -> Result<ArmSummary, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let mut fixed_actions = None;
    if arm == Arm::IdealProportions {
        let sweep = ideal_sweep(scenario, scenario.learner.sweep_step)?;
        fixed_actions = Some(sweep.best.actions.clone());
    }
    let setup = setup_for(arm, fixed_actions.clone());
    let outputs: Result<Vec<TrialOutput>, ScenarioError> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(scenario, &setup, t, opts))
        .collect();
    let outputs = outputs?;
    let costs: Vec<f64> = outputs.iter().map(|o| o.result.total_cost).collect();
    Ok(ArmSummary {
        arm,
        mean_total_cost: mean(&costs),
        std_error: std_error(&costs),
        trial_count: trials,
        outputs,
        fixed_actions,
    })
}
