//! Trial statistics and the headroom report.

use super::arms::{Arm, ArmSummary, ExperimentError};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1); zero for fewer than two samples.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    var.sqrt()
}

pub fn std_error(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    sample_std(xs) / (xs.len() as f64).sqrt()
}

/// How much of the gap between a baseline and the ideal proportions an arm
/// closes: `(baseline − arm) / (baseline − ideal)`. 1 means the arm matched
/// the ideal cost, 0 means it matched the baseline.
pub fn headroom_fraction(baseline: f64, ideal: f64, arm: f64) -> f64 {
    (baseline - arm) / (baseline - ideal)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadroomRow {
    pub arm: Arm,
    /// Fraction of the shortest-path-baseline headroom recovered.
    pub of_baseline: f64,
    /// Fraction of the standard-learner headroom recovered (relational
    /// arms only).
    pub of_standard: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadroomReport {
    pub baseline_cost: f64,
    pub ideal_cost: f64,
    pub rows: Vec<HeadroomRow>,
}

/// Builds the headroom report from arm summaries. Requires the
/// shortest-path baseline, the ideal arm, and at least one learner arm;
/// the standard-learner comparison appears for the leader/follower and
/// interleaved arms when the standard arm is present.
pub fn headroom_report(summaries: &[ArmSummary]) -> Result<HeadroomReport, ExperimentError> {
    let find = |arm: Arm| summaries.iter().find(|s| s.arm == arm);
    let baseline = find(Arm::BellmanFord).ok_or(ExperimentError::MissingArm {
        arm: Arm::BellmanFord.name(),
    })?;
    let ideal = find(Arm::IdealProportions).ok_or(ExperimentError::MissingArm {
        arm: Arm::IdealProportions.name(),
    })?;
    let learners: Vec<&ArmSummary> = [Arm::StdMbl, Arm::LfMbl, Arm::IntMbl]
        .iter()
        .filter_map(|&a| find(a))
        .collect();
    if learners.is_empty() {
        return Err(ExperimentError::MissingArm {
            arm: Arm::StdMbl.name(),
        });
    }
    let std_cost = find(Arm::StdMbl).map(|s| s.mean_total_cost);
    let rows = learners
        .iter()
        .map(|s| {
            let of_standard = match (s.arm, std_cost) {
                (Arm::LfMbl | Arm::IntMbl, Some(std)) => Some(headroom_fraction(
                    std,
                    ideal.mean_total_cost,
                    s.mean_total_cost,
                )),
                _ => None,
            };
            HeadroomRow {
                arm: s.arm,
                of_baseline: headroom_fraction(
                    baseline.mean_total_cost,
                    ideal.mean_total_cost,
                    s.mean_total_cost,
                ),
                of_standard,
            }
        })
        .collect();
    Ok(HeadroomReport {
        baseline_cost: baseline.mean_total_cost,
        ideal_cost: ideal.mean_total_cost,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std_error() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), 5.0);
        let expected_std = (32.0f64 / 7.0).sqrt();
        assert!((sample_std(&xs) - expected_std).abs() < 1e-12);
        assert!((std_error(&xs) - expected_std / 8.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_stats() {
        assert_eq!(mean(&[]), 0.0);
        assert_eq!(sample_std(&[3.0]), 0.0);
        assert_eq!(std_error(&[3.0]), 0.0);
    }

    #[test]
    fn headroom_endpoints() {
        // Matching the ideal recovers all the headroom; matching the
        // baseline recovers none.
        assert_eq!(headroom_fraction(100.0, 40.0, 40.0), 1.0);
        assert_eq!(headroom_fraction(100.0, 40.0, 100.0), 0.0);
    }

    #[test]
    fn headroom_on_published_style_numbers() {
        let f = headroom_fraction(1_537_914.0, 444_637.0, 519_557.0);
        assert!((f - 0.9315).abs() < 1e-3, "got {f}");
    }
}
