//! Memory-based reward estimation: k-nearest-neighbor retrieval with a mean
//! or least-squares-plane fit, plus Boltzmann action selection.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnError {
    #[error("cannot estimate from an empty dataset")]
    NoData,
    #[error("learner config invalid: {field} = {value}")]
    InvalidConfig { field: &'static str, value: f64 },
    #[error("query has {query} features but dataset examples have {dataset}")]
    FeatureMismatch { query: usize, dataset: usize },
}

/// One observed (input, outcome) pair: the agent's action features and the
/// system-wide reward of the interval they were in force.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample {
    pub features: Vec<f64>,
    pub reward: f64,
    pub interval_index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitKind {
    Mean,
    #[default]
    LinearLeastSquares,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    /// Neighbors consulted per estimate.
    pub k: usize,
    pub fit: FitKind,
    /// Gaussian exploration candidates drawn per learning interval.
    pub n_samples: usize,
    /// Exploration standard deviation.
    pub sigma: f64,
    /// Boltzmann temperature, in reward units.
    pub temperature: f64,
    /// Training-grid increment over [0, 1].
    pub sweep_step: f64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            k: 12,
            fit: FitKind::LinearLeastSquares,
            n_samples: 5,
            sigma: 0.0025,
            temperature: 3000.0,
            sweep_step: 0.05,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        if self.k < 1 {
            return Err(LearnError::InvalidConfig {
                field: "k",
                value: self.k as f64,
            });
        }
        if self.n_samples < 1 {
            return Err(LearnError::InvalidConfig {
                field: "n_samples",
                value: self.n_samples as f64,
            });
        }
        if !(self.sigma > 0.0) {
            return Err(LearnError::InvalidConfig {
                field: "sigma",
                value: self.sigma,
            });
        }
        if !(self.temperature > 0.0) {
            return Err(LearnError::InvalidConfig {
                field: "temperature",
                value: self.temperature,
            });
        }
        if !(self.sweep_step > 0.0 && self.sweep_step <= 1.0) {
            return Err(LearnError::InvalidConfig {
                field: "sweep_step",
                value: self.sweep_step,
            });
        }
        Ok(())
    }
}

/// The proportion grid `{0, step, …, 1}` with exact endpoints.
///
/// `step` must divide 1 evenly; points are computed as `i / (n-1)` so the
/// grid contains 0 and 1 exactly and comparisons against simple fractions
/// behave as expected.
pub fn action_grid(step: f64) -> Vec<f64> {
    assert!(step > 0.0 && step <= 1.0, "grid step must be in (0, 1]");
    let segments = (1.0 / step).round();
    assert!(
        (segments * step - 1.0).abs() < 1e-9,
        "grid step {step} does not divide 1 evenly"
    );
    let n = segments as usize;
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `k` nearest examples by Euclidean distance in feature
/// space; ties resolved by dataset order. Returns all indices when the
/// dataset holds fewer than `k` points.
pub fn k_nearest(dataset: &[TrainingExample], query: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = dataset
        .iter()
        .enumerate()
        .map(|(i, ex)| (distance_sq(&ex.features, query), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order.truncate(k);
    order.into_iter().map(|(_, i)| i).collect()
}

/// Estimates the reward at `query` from the k nearest neighbors.
///
/// The mean fit averages neighbor rewards. The linear fit solves the
/// least-squares plane over the neighbors and evaluates it at the query,
/// falling back to the mean when the normal system is singular (e.g. all
/// neighbors share a feature value).
pub fn estimate_reward(
    dataset: &[TrainingExample],
    query: &[f64],
    config: &LearnerConfig,
) -> Result<f64, LearnError> {
    if dataset.is_empty() {
        return Err(LearnError::NoData);
    }
    if dataset[0].features.len() != query.len() {
        return Err(LearnError::FeatureMismatch {
            query: query.len(),
            dataset: dataset[0].features.len(),
        });
    }
    let neighbors = k_nearest(dataset, query, config.k);
    let mean = neighbors.iter().map(|&i| dataset[i].reward).sum::<f64>() / neighbors.len() as f64;
    match config.fit {
        FitKind::Mean => Ok(mean),
        FitKind::LinearLeastSquares => {
            Ok(linear_fit_eval(dataset, &neighbors, query).unwrap_or(mean))
        }
    }
}

/// Least-squares plane through the selected examples, evaluated at `query`.
/// `None` when the normal equations are singular.
fn linear_fit_eval(dataset: &[TrainingExample], idx: &[usize], query: &[f64]) -> Option<f64> {
    let dim = query.len() + 1; // intercept + one coefficient per feature
    let mut ata = vec![vec![0.0; dim]; dim];
    let mut atb = vec![0.0; dim];
    for &i in idx {
        let ex = &dataset[i];
        let mut row = Vec::with_capacity(dim);
        row.push(1.0);
        row.extend_from_slice(&ex.features);
        for r in 0..dim {
            for c in 0..dim {
                ata[r][c] += row[r] * row[c];
            }
            atb[r] += row[r] * ex.reward;
        }
    }
    let coeffs = solve_linear(&mut ata, &mut atb)?;
    let mut value = coeffs[0];
    for (c, q) in coeffs[1..].iter().zip(query) {
        value += c * q;
    }
    Some(value)
}

/// Gaussian elimination with partial pivoting; `None` on a singular pivot.
fn solve_linear(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Selection probabilities `∝ exp(estimate / temperature)`, computed with
/// the usual max-shift so the scale of the estimates cannot overflow.
pub fn boltzmann_probs(estimates: &[f64], temperature: f64) -> Vec<f64> {
    assert!(temperature > 0.0);
    assert!(!estimates.is_empty());
    let max = estimates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = estimates
        .iter()
        .map(|&e| ((e - max) / temperature).exp())
        .collect();
    let sum: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / sum).collect()
}

/// Draws an index with the given probabilities from a uniform variate.
pub fn select_by_probs(probs: &[f64], draw: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            return i;
        }
    }
    probs.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(features: &[f64], reward: f64) -> TrainingExample {
        TrainingExample {
            features: features.to_vec(),
            reward,
            interval_index: 0,
        }
    }

    #[test]
    fn grid_contains_exact_endpoints() {
        let grid = action_grid(0.05);
        assert_eq!(grid.len(), 21);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[20], 1.0);
        assert_eq!(grid[3], 0.15);
    }

    #[test]
    #[should_panic(expected = "does not divide 1 evenly")]
    fn grid_rejects_uneven_step() {
        action_grid(0.3);
    }

    #[test]
    fn single_neighbor_estimate() {
        let data = vec![ex(&[0.5], -100.0)];
        let cfg = LearnerConfig {
            k: 1,
            fit: FitKind::Mean,
            ..Default::default()
        };
        assert_eq!(estimate_reward(&data, &[0.7], &cfg).unwrap(), -100.0);
    }

    #[test]
    fn mean_of_three_nearest() {
        let data = vec![
            ex(&[0.1], -10.0),
            ex(&[0.2], -20.0),
            ex(&[0.3], -30.0),
            ex(&[0.9], -500.0),
        ];
        let cfg = LearnerConfig {
            k: 3,
            fit: FitKind::Mean,
            ..Default::default()
        };
        assert_eq!(estimate_reward(&data, &[0.2], &cfg).unwrap(), -20.0);
    }

    #[test]
    fn linear_fit_recovers_linear_data() {
        // reward = -50a - 10 sampled on a grid; twelve nearest neighbors.
        let data: Vec<TrainingExample> = action_grid(0.05)
            .into_iter()
            .map(|a| ex(&[a], -50.0 * a - 10.0))
            .collect();
        let cfg = LearnerConfig {
            k: 12,
            fit: FitKind::LinearLeastSquares,
            ..Default::default()
        };
        let got = estimate_reward(&data, &[0.4], &cfg).unwrap();
        assert!((got - (-30.0)).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn linear_fit_two_features() {
        let mut data = Vec::new();
        for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for b in [0.0, 0.5, 1.0] {
                data.push(ex(&[a, b], 3.0 * a - 7.0 * b + 2.0));
            }
        }
        let cfg = LearnerConfig {
            k: data.len(),
            ..Default::default()
        };
        let got = estimate_reward(&data, &[0.3, 0.6], &cfg).unwrap();
        assert!((got - (3.0 * 0.3 - 7.0 * 0.6 + 2.0)).abs() < 1e-9);
    }

    #[test]
    fn singular_fit_falls_back_to_mean() {
        // All neighbors share the same feature value: no plane is defined.
        let data = vec![ex(&[0.5], -10.0), ex(&[0.5], -30.0)];
        let cfg = LearnerConfig {
            k: 2,
            ..Default::default()
        };
        assert_eq!(estimate_reward(&data, &[0.5], &cfg).unwrap(), -20.0);
    }

    #[test]
    fn empty_dataset_errors() {
        let cfg = LearnerConfig::default();
        assert_eq!(
            estimate_reward(&[], &[0.5], &cfg).unwrap_err(),
            LearnError::NoData
        );
    }

    #[test]
    fn feature_mismatch_errors() {
        let data = vec![ex(&[0.5, 0.5], -1.0)];
        let cfg = LearnerConfig::default();
        assert!(matches!(
            estimate_reward(&data, &[0.5], &cfg),
            Err(LearnError::FeatureMismatch { .. })
        ));
    }

    #[test]
    fn knn_matches_brute_force_sort() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _case in 0..50 {
            let n = rng.random_range(1..=100);
            let data: Vec<TrainingExample> = (0..n)
                .map(|_| ex(&[rng.random::<f64>(), rng.random::<f64>()], 0.0))
                .collect();
            let query = [rng.random::<f64>(), rng.random::<f64>()];
            let k = rng.random_range(1..=n + 2);
            let got = k_nearest(&data, &query, k);
            let mut brute: Vec<usize> = (0..n).collect();
            brute.sort_by(|&i, &j| {
                distance_sq(&data[i].features, &query)
                    .total_cmp(&distance_sq(&data[j].features, &query))
                    .then(i.cmp(&j))
            });
            brute.truncate(k);
            assert_eq!(got, brute);
        }
    }

    #[test]
    fn boltzmann_two_candidates() {
        // Estimates (-100, -200) at temperature 3000.
        let probs = boltzmann_probs(&[-100.0, -200.0], 3000.0);
        let expected = 1.0 / (1.0 + (-1.0f64 / 30.0).exp());
        assert!((probs[0] - expected).abs() < 1e-12);
        assert!((probs[0] - 0.5083).abs() < 1e-4);
    }

    #[test]
    fn boltzmann_equal_estimates_uniform() {
        let probs = boltzmann_probs(&[-5.0, -5.0, -5.0], 10.0);
        for p in probs {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn boltzmann_high_temperature_limit_is_uniform() {
        let probs = boltzmann_probs(&[-100.0, -5000.0, -900.0], 1e12);
        for p in probs {
            assert!((p - 1.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn boltzmann_shift_invariant_and_normalized() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(1..8);
            let est: Vec<f64> = (0..n).map(|_| rng.random_range(-1e4..0.0)).collect();
            let temp = rng.random_range(1.0..5000.0);
            let probs = boltzmann_probs(&est, temp);
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            let shifted: Vec<f64> = est.iter().map(|e| e + 123.456).collect();
            let probs2 = boltzmann_probs(&shifted, temp);
            for (a, b) in probs.iter().zip(&probs2) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn selection_covers_distribution() {
        let probs = [0.25, 0.5, 0.25];
        assert_eq!(select_by_probs(&probs, 0.1), 0);
        assert_eq!(select_by_probs(&probs, 0.3), 1);
        assert_eq!(select_by_probs(&probs, 0.9), 2);
        assert_eq!(select_by_probs(&probs, 1.0), 2);
    }

    #[test]
    fn config_validation_names_fields() {
        let bad = LearnerConfig {
            sigma: -1.0,
            ..Default::default()
        };
        match bad.validate().unwrap_err() {
            LearnError::InvalidConfig { field, .. } => assert_eq!(field, "sigma"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
