//! The per-agent learner: a fixed training walk over the proportion grid,
//! then grid selection on the collected data, then Gaussian exploration
//! with Boltzmann selection for the rest of the run.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::memory::{
    action_grid, boltzmann_probs, estimate_reward, select_by_probs, LearnError, LearnerConfig,
    TrainingExample,
};

/// Grid strides coprime with the 21-point default grid, assigned to agents
/// in order. Distinct strides make concurrently-training agents cover
/// distinct joint actions instead of walking in lockstep, and large strides
/// scramble each agent's visit order so an action's observed reward is not
/// confounded with how much queue backlog earlier intervals left behind.
pub const TRAINING_STRIDES: [usize; 8] = [8, 13, 16, 5, 11, 2, 17, 10];

#[derive(Debug)]
pub struct MemoryLearner {
    config: LearnerConfig,
    grid: Vec<f64>,
    stride: usize,
    dataset: Vec<TrainingExample>,
    explore_rng: ChaCha8Rng,
    select_rng: ChaCha8Rng,
    intervals_recorded: u32,
}

impl MemoryLearner {
    pub fn new(
        config: LearnerConfig,
        stride: usize,
        explore_rng: ChaCha8Rng,
        select_rng: ChaCha8Rng,
    ) -> Self {
        config.validate().expect("learner config must be valid");
        let grid = action_grid(config.sweep_step);
        Self {
            config,
            grid,
            stride,
            dataset: Vec::new(),
            explore_rng,
            select_rng,
            intervals_recorded: 0,
        }
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.config
    }

    pub fn dataset(&self) -> &[TrainingExample] {
        &self.dataset
    }

    pub fn into_dataset(self) -> Vec<TrainingExample> {
        self.dataset
    }

    /// Deterministic grid walk for the training stage: agent-specific
    /// stride, starting at zero, wrapping around the grid.
    pub fn training_action(&self, interval_index: u32) -> f64 {
        let n = self.grid.len();
        self.grid[(interval_index as usize * self.stride) % n]
    }

    /// Appends one completed interval's observation.
    pub fn record(&mut self, features: Vec<f64>, reward: f64) {
        let interval_index = self.intervals_recorded;
        self.intervals_recorded += 1;
        self.dataset.push(TrainingExample {
            features,
            reward,
            interval_index,
        });
    }

    pub fn estimate(&self, query: &[f64]) -> Result<f64, LearnError> {
        estimate_reward(&self.dataset, query, &self.config)
    }

    /// Sweeps the grid against the training data and returns the action
    /// with the best estimated reward; ties go to the lowest value.
    /// `peer_actions` fills the non-own feature slots of each query.
    pub fn post_training_selection(&self, peer_actions: &[f64]) -> Result<f64, LearnError> {
        let mut best = self.grid[0];
        let mut best_estimate = f64::NEG_INFINITY;
        for &a in &self.grid {
            let mut query = Vec::with_capacity(1 + peer_actions.len());
            query.push(a);
            query.extend_from_slice(peer_actions);
            let estimate = self.estimate(&query)?;
            if estimate > best_estimate {
                best_estimate = estimate;
                best = a;
            }
        }
        Ok(best)
    }

    /// One exploration step: draws `n_samples` candidates from a Gaussian
    /// centered on the previous action (clamped to [0, 1]), estimates each,
    /// and Boltzmann-selects among them. Returns the chosen action and its
    /// estimate.
    pub fn learning_step(
        &mut self,
        previous_action: f64,
        peer_actions: &[f64],
    ) -> Result<(f64, f64), LearnError> {
        let normal = Normal::new(previous_action, self.config.sigma).map_err(|_| {
            LearnError::InvalidConfig {
                field: "sigma",
                value: self.config.sigma,
            }
        })?;
        let candidates: Vec<f64> = (0..self.config.n_samples)
            .map(|_| normal.sample(&mut self.explore_rng).clamp(0.0, 1.0))
            .collect();
        let mut estimates = Vec::with_capacity(candidates.len());
        for &c in &candidates {
            let mut query = Vec::with_capacity(1 + peer_actions.len());
            query.push(c);
            query.extend_from_slice(peer_actions);
            estimates.push(self.estimate(&query)?);
        }
        let probs = boltzmann_probs(&estimates, self.config.temperature);
        let draw: f64 = self.select_rng.random();
        let chosen = select_by_probs(&probs, draw);
        Ok((candidates[chosen], estimates[chosen]))
    }
}
