//! Proportion vectors, masking transforms, and deterministic splitting.

mod masking;
mod splitter;
mod vector;

pub use masking::{apply_mask, hard_mask, soft_mask, MaskError, MaskingConfig, MaskingMode};
pub use splitter::{reset_splitter, split_choose, AgingPolicy, SplitterState};
pub use vector::{ProportionVector, VectorError, SUM_TOLERANCE};
