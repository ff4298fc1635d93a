use thiserror::Error;

/// Tolerance on the sum-to-one invariant.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VectorError {
    #[error("proportion vector needs at least one component")]
    Empty,
    #[error("component {index} is {value}, outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("components sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("cannot normalize weights with nonpositive sum {sum}")]
    ZeroSum { sum: f64 },
}

/// A per-destination traffic split over a router's outbound links.
///
/// Every component lies in `[0, 1]` and the components sum to one within
/// [`SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionVector {
    weights: Vec<f64>,
}

impl ProportionVector {
    /// Validates `weights` as a proportion vector.
    pub fn new(weights: Vec<f64>) -> Result<Self, VectorError> {
        if weights.is_empty() {
            return Err(VectorError::Empty);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(VectorError::OutOfRange { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(VectorError::NotNormalized { sum });
        }
        Ok(Self { weights })
    }

    /// Builds a vector by scaling nonnegative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self, VectorError> {
        if weights.is_empty() {
            return Err(VectorError::Empty);
        }
        for (index, &value) in weights.iter().enumerate() {
            if value < 0.0 || value.is_nan() || value.is_infinite() {
                return Err(VectorError::OutOfRange { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(VectorError::ZeroSum { sum });
        }
        Ok(Self {
            weights: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    /// Even split over `m` links.
    pub fn uniform(m: usize) -> Self {
        assert!(m > 0, "uniform split needs at least one link");
        Self {
            weights: vec![1.0 / m as f64; m],
        }
    }

    /// The two-link split `(a, 1 - a)`.
    pub fn binary(a: f64) -> Result<Self, VectorError> {
        Self::new(vec![a, 1.0 - a])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Largest absolute per-component difference to `other`.
    pub fn max_component_delta(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_vector() {
        let p = ProportionVector::new(vec![0.59, 0.31, 0.1]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.get(0), 0.59);
    }

    #[test]
    fn rejects_out_of_range_component() {
        let err = ProportionVector::new(vec![1.2, -0.2]).unwrap_err();
        assert!(matches!(err, VectorError::OutOfRange { index: 0, .. }));
    }

    #[test]
    fn rejects_bad_sum() {
        let err = ProportionVector::new(vec![0.5, 0.4]).unwrap_err();
        assert!(matches!(err, VectorError::NotNormalized { .. }));
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(ProportionVector::new(vec![]).unwrap_err(), VectorError::Empty);
    }

    #[test]
    fn normalizes_weights() {
        let p = ProportionVector::normalized(vec![2.0, 1.0, 1.0]).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn normalize_rejects_zero_sum() {
        let err = ProportionVector::normalized(vec![0.0, 0.0]).unwrap_err();
        assert!(matches!(err, VectorError::ZeroSum { .. }));
    }

    #[test]
    fn binary_split() {
        let p = ProportionVector::binary(0.25).unwrap();
        assert_eq!(p.weights(), &[0.25, 0.75]);
    }
}
