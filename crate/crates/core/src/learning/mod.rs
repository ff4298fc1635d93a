//! Memory-based reinforcement learners and their interaction structures.
//!
//! An agent's action is a scalar in `[0, 1]`: the share of its traffic sent
//! down its first outbound link, the rest going down the second. Actions
//! freeze for the length of a learning interval; the negated system-wide
//! delay accumulated over the interval is the reward every agent observes.

mod agent;
mod memory;
mod schedule;

pub use agent::{MemoryLearner, TRAINING_STRIDES};
pub use memory::{
    action_grid, boltzmann_probs, estimate_reward, k_nearest, select_by_probs, FitKind,
    LearnError, LearnerConfig, TrainingExample,
};
pub use schedule::{
    interaction_schedule, Boundary, GroupTag, InteractionMode, InteractionStructure,
    ScheduleError, StageSchedule,
};

/// The reward broadcast to an agent group at an interval boundary: the
/// negated sum of the delays of all packets delivered during the interval,
/// so maximizing reward minimizes total delay.
pub fn interval_reward(delay_sum: f64) -> f64 {
    -delay_sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reward_is_negated_delay() {
        assert_eq!(interval_reward(0.0), 0.0);
        assert_eq!(interval_reward(8.0), -8.0);
    }
}
