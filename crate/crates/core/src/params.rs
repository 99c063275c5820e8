use serde::{Deserialize, Serialize};

use crate::error::{Error, ParamViolation, Result};

/// How feature dimensions are assigned to sub-features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitStrategy {
    /// Consecutive dimension ranges.
    #[default]
    Contiguous,
    /// A seeded permutation of the dimensions, then the contiguous rule.
    Random,
}

/// Distance used for the initial rankings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Euclidean distance between unit-normalized rows, halved into [0, 1].
    #[default]
    EuclideanNormalized,
}

/// Re-ranking hyper-parameters.
///
/// The defaults are the Market-1501 configuration: 11 sub-features,
/// `k1 = 20`, `k2 = 4`, `alpha = 0.5`, `lambda = 0.2`, two encoding passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReRankParams {
    /// Number of sub-features `L`.
    pub num_parts: usize,
    /// Encoding neighbourhood size.
    pub k1: usize,
    /// Enhancement neighbourhood size.
    pub k2: usize,
    /// Fusion exponent of the power mean.
    pub alpha: f64,
    /// Weight of the intermediate Jaccard distance when renewing distances.
    pub lambda: f64,
    /// Number of encoding passes `T`.
    pub iterations: usize,
    pub split: SplitStrategy,
    pub seed: u64,
    pub metric: Metric,
}

impl Default for ReRankParams {
    fn default() -> Self {
        Self {
            num_parts: 11,
            k1: 20,
            k2: 4,
            alpha: 0.5,
            lambda: 0.2,
            iterations: 2,
            split: SplitStrategy::Contiguous,
            seed: 0,
            metric: Metric::EuclideanNormalized,
        }
    }
}

impl ReRankParams {
    /// Checks every constraint that does not depend on the data.
    pub fn violations(&self) -> Vec<ParamViolation> {
        let mut out = Vec::new();
        if self.num_parts < 1 {
            out.push(ParamViolation::new("L", "must be at least 1"));
        }
        if self.k1 < 1 {
            out.push(ParamViolation::new("k1", "must be at least 1"));
        }
        if self.k2 < 1 {
            out.push(ParamViolation::new("k2", "must be at least 1"));
        } else if self.k2 > self.k1 {
            out.push(ParamViolation::new(
                "k2",
                format!("must not exceed k1 ({} > {})", self.k2, self.k1),
            ));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            out.push(ParamViolation::new(
                "alpha",
                format!("must be a positive finite number, got {}", self.alpha),
            ));
        }
        if !(self.lambda >= 0.0 && self.lambda < 1.0) {
            out.push(ParamViolation::new(
                "lambda",
                format!("must lie in [0, 1), got {}", self.lambda),
            ));
        }
        if self.iterations < 1 {
            out.push(ParamViolation::new("iterations", "must be at least 1"));
        }
        out
    }

    /// Full validation against a feature dimension and gallery size.
    pub fn validate(&self, dim: usize, gallery_len: usize) -> Result<()> {
        let mut out = self.violations();
        if self.num_parts > dim {
            out.push(ParamViolation::new(
                "L",
                format!("must not exceed the feature dimension ({} > {dim})", self.num_parts),
            ));
        }
        if self.k1 >= gallery_len {
            out.push(ParamViolation::new(
                "k1",
                format!("must be smaller than the gallery size ({} >= {gallery_len})", self.k1),
            ));
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(out))
        }
    }
}
