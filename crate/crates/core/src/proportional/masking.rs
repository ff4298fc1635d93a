//! Hard and soft masking: transforms from a base proportion vector to the
//! applied proportion vector actually used for routing.
//!
//! Masking suppresses outbound links toward neighbors whose per-destination
//! ordering value `v` is not strictly below the router's own, which keeps
//! multi-path traffic cycle-free when every router follows the same ordering.
//! Hard masking zeroes such links outright; the soft variants additionally
//! attenuate links whose ordering value approaches the router's own, so that
//! a link's share falls to zero continuously instead of being clipped.

use thiserror::Error;

use super::vector::ProportionVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskingMode {
    /// No masking: the applied vector is the base vector.
    None,
    /// Zero out non-descending links, renormalize the rest.
    Hard,
    /// Attenuate by `exp(beta * (v_self - v_i))` on surviving links.
    #[default]
    SoftExponential,
    /// Attenuate by `(v_self - v_i)^beta` on surviving links.
    SoftPower,
}

impl MaskingMode {
    pub fn is_soft(self) -> bool {
        matches!(self, MaskingMode::SoftExponential | MaskingMode::SoftPower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskingConfig {
    pub mode: MaskingMode,
    /// Shape parameter for the soft modes; ignored otherwise.
    pub beta: f64,
}

impl MaskingConfig {
    pub fn new(mode: MaskingMode, beta: f64) -> Result<Self, MaskError> {
        if mode.is_soft() && !(beta >= 0.0) {
            return Err(MaskError::InvalidBeta { beta });
        }
        Ok(Self { mode, beta })
    }

    pub fn none() -> Self {
        Self {
            mode: MaskingMode::None,
            beta: 0.0,
        }
    }

    pub fn hard() -> Self {
        Self {
            mode: MaskingMode::Hard,
            beta: 0.0,
        }
    }

    pub fn soft_exponential(beta: f64) -> Self {
        Self {
            mode: MaskingMode::SoftExponential,
            beta,
        }
    }

    pub fn soft_power(beta: f64) -> Self {
        Self {
            mode: MaskingMode::SoftPower,
            beta,
        }
    }
}

impl Default for MaskingConfig {
    fn default() -> Self {
        Self::soft_exponential(DEFAULT_BETA)
    }
}

/// Default shape parameter for soft masking.
pub const DEFAULT_BETA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaskError {
    #[error("no admissible outbound link: every link is masked or has zero base weight")]
    NoAdmissibleLink,
    #[error("proportion vector has {vector} components but {neighbors} neighbor values given")]
    LengthMismatch { vector: usize, neighbors: usize },
    #[error("soft mask invoked with non-soft mode {mode:?}")]
    NotSoftMode { mode: MaskingMode },
    #[error("beta must be nonnegative, got {beta}")]
    InvalidBeta { beta: f64 },
}

/// Heaviside step used by every masking variant: 1 for strictly positive
/// argument, 0 otherwise. Equality masks the link, so a link's share is
/// already zero at the point where its ordering value reaches the router's.
#[inline]
fn admissible(x: f64) -> bool {
    x > 0.0
}

fn check_lengths(p: &ProportionVector, v_neighbors: &[f64]) -> Result<(), MaskError> {
    if p.len() != v_neighbors.len() {
        return Err(MaskError::LengthMismatch {
            vector: p.len(),
            neighbors: v_neighbors.len(),
        });
    }
    Ok(())
}

/// Hard masking: `p'_i ∝ p_i · Θ(v_self − v_i)`, renormalized.
///
/// Ratios between surviving components are preserved exactly; the whole
/// vector is rejected with [`MaskError::NoAdmissibleLink`] when no component
/// survives with positive weight (the caller falls back to pure
/// minimum-cost forwarding).
pub fn hard_mask(
    p: &ProportionVector,
    v_self: f64,
    v_neighbors: &[f64],
) -> Result<ProportionVector, MaskError> {
    check_lengths(p, v_neighbors)?;
    let weights: Vec<f64> = p
        .weights()
        .iter()
        .zip(v_neighbors)
        .map(|(&w, &v)| if admissible(v_self - v) { w } else { 0.0 })
        .collect();
    renormalize(weights)
}

/// Soft masking: attenuates surviving components before renormalizing.
///
/// Exponential mode weighs component `i` by `exp(beta · (v_self − v_i))`;
/// power mode by `(v_self − v_i)^beta`. Both reduce to [`hard_mask`] at
/// `beta = 0`. Weights are computed relative to the largest surviving
/// margin so that extreme ordering values cannot overflow; the shift (or
/// common scale, for the power form) divides out in the normalization.
pub fn soft_mask(
    p: &ProportionVector,
    v_self: f64,
    v_neighbors: &[f64],
    config: &MaskingConfig,
) -> Result<ProportionVector, MaskError> {
    check_lengths(p, v_neighbors)?;
    if !config.mode.is_soft() {
        return Err(MaskError::NotSoftMode { mode: config.mode });
    }
    let margins: Vec<f64> = v_neighbors.iter().map(|&v| v_self - v).collect();
    let max_margin = margins
        .iter()
        .zip(p.weights())
        .filter(|(&x, &w)| admissible(x) && w > 0.0)
        .map(|(&x, _)| x)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_margin == f64::NEG_INFINITY {
        return Err(MaskError::NoAdmissibleLink);
    }
    let weights: Vec<f64> = p
        .weights()
        .iter()
        .zip(&margins)
        .map(|(&w, &x)| {
            if !admissible(x) {
                return 0.0;
            }
            let factor = match config.mode {
                MaskingMode::SoftExponential => (config.beta * (x - max_margin)).exp(),
                MaskingMode::SoftPower => (x / max_margin).powf(config.beta),
                _ => unreachable!(),
            };
            w * factor
        })
        .collect();
    renormalize(weights)
}

/// Dispatches on the configured mode. `None` returns the base vector.
pub fn apply_mask(
    config: &MaskingConfig,
    p: &ProportionVector,
    v_self: f64,
    v_neighbors: &[f64],
) -> Result<ProportionVector, MaskError> {
    match config.mode {
        MaskingMode::None => Ok(p.clone()),
        MaskingMode::Hard => hard_mask(p, v_self, v_neighbors),
        MaskingMode::SoftExponential | MaskingMode::SoftPower => {
            soft_mask(p, v_self, v_neighbors, config)
        }
    }
}

fn renormalize(weights: Vec<f64>) -> Result<ProportionVector, MaskError> {
    let sum: f64 = weights.iter().sum();
    if !(sum > 0.0) {
        return Err(MaskError::NoAdmissibleLink);
    }
    Ok(ProportionVector::normalized(weights).expect("masked weights are nonnegative and finite"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(w: &[f64]) -> ProportionVector {
        ProportionVector::new(w.to_vec()).unwrap()
    }

    #[test]
    fn hard_mask_forces_single_admissible_link() {
        let out = hard_mask(&pv(&[0.5, 0.5]), 5.0, &[3.0, 7.0]).unwrap();
        assert_eq!(out.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn hard_mask_renormalizes_survivors() {
        let out = hard_mask(&pv(&[0.59, 0.31, 0.1]), 10.0, &[2.0, 12.0, 4.0]).unwrap();
        assert!((out.get(0) - 0.59 / 0.69).abs() < 1e-12);
        assert_eq!(out.get(1), 0.0);
        assert!((out.get(2) - 0.10 / 0.69).abs() < 1e-12);
    }

    #[test]
    fn hard_mask_identity_when_all_descending() {
        let base = pv(&[0.3, 0.3, 0.4]);
        let out = hard_mask(&base, 9.0, &[1.0, 2.0, 3.0]).unwrap();
        for i in 0..3 {
            assert!((out.get(i) - base.get(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn hard_mask_equality_masks_the_link() {
        let out = hard_mask(&pv(&[0.5, 0.5]), 5.0, &[5.0, 1.0]).unwrap();
        assert_eq!(out.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn hard_mask_rejects_when_everything_masked() {
        let err = hard_mask(&pv(&[0.5, 0.5]), 1.0, &[2.0, 3.0]).unwrap_err();
        assert_eq!(err, MaskError::NoAdmissibleLink);
    }

    #[test]
    fn hard_mask_rejects_zero_weight_survivors() {
        // The only admissible link carries zero base weight.
        let err = hard_mask(&pv(&[0.0, 1.0]), 5.0, &[3.0, 9.0]).unwrap_err();
        assert_eq!(err, MaskError::NoAdmissibleLink);
    }

    #[test]
    fn soft_exponential_matches_direct_evaluation() {
        let cfg = MaskingConfig::soft_exponential(0.25);
        let out = soft_mask(&pv(&[0.5, 0.5]), 10.0, &[2.0, 6.0], &cfg).unwrap();
        let expected = std::f64::consts::E.powi(2)
            / (std::f64::consts::E.powi(2) + std::f64::consts::E);
        assert!((out.get(0) - expected).abs() < 1e-12);
        assert!((out.get(1) - (1.0 - expected)).abs() < 1e-12);
    }

    #[test]
    fn soft_power_matches_direct_evaluation() {
        let cfg = MaskingConfig::soft_power(1.0);
        let out = soft_mask(&pv(&[0.5, 0.5]), 10.0, &[2.0, 6.0], &cfg).unwrap();
        // Weights (0.5·8, 0.5·4) → (2/3, 1/3).
        assert!((out.get(0) - 2.0 / 3.0).abs() < 1e-12);
        assert!((out.get(1) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn soft_beta_zero_equals_hard() {
        let base = pv(&[0.2, 0.5, 0.3]);
        let v = [4.0, 9.0, 1.0];
        let hard = hard_mask(&base, 7.0, &v).unwrap();
        for mode in [MaskingMode::SoftExponential, MaskingMode::SoftPower] {
            let soft = soft_mask(&base, 7.0, &v, &MaskingConfig { mode, beta: 0.0 }).unwrap();
            assert!(hard.max_component_delta(&soft) < 1e-12);
        }
    }

    #[test]
    fn soft_mask_rejects_non_soft_mode() {
        let err = soft_mask(&pv(&[1.0]), 2.0, &[1.0], &MaskingConfig::hard()).unwrap_err();
        assert!(matches!(err, MaskError::NotSoftMode { .. }));
    }

    #[test]
    fn unknown_neighbor_value_masks_the_link() {
        let out = hard_mask(&pv(&[0.5, 0.5]), 5.0, &[f64::INFINITY, 1.0]).unwrap();
        assert_eq!(out.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn length_mismatch_is_reported() {
        let err = hard_mask(&pv(&[0.5, 0.5]), 5.0, &[1.0]).unwrap_err();
        assert!(matches!(err, MaskError::LengthMismatch { .. }));
    }

    #[test]
    fn apply_mask_none_is_identity() {
        let base = pv(&[0.9, 0.1]);
        let out = apply_mask(&MaskingConfig::none(), &base, 0.0, &[10.0, 10.0]).unwrap();
        assert_eq!(out, base);
    }

    #[test]
    fn soft_mask_survives_extreme_margins() {
        let cfg = MaskingConfig::soft_exponential(2.0);
        let out = soft_mask(&pv(&[0.5, 0.5]), 1e6, &[0.0, 5e5], &cfg).unwrap();
        assert!(out.get(0) > 0.99);
        let sum: f64 = out.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }
}
