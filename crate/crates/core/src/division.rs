//! Feature division: partitioning the dimensions of a feature into `L`
//! nearly equal sub-features.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::SplitStrategy;

/// `L` disjoint index sets covering `0..dim`, sizes differing by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubFeaturePartition {
    parts: Vec<Vec<usize>>,
    dim: usize,
}

impl SubFeaturePartition {
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }
}

/// Splits `dim` feature dimensions into `num_parts` sub-features.
///
/// The first `dim % num_parts` parts receive `ceil(dim / num_parts)` indices,
/// the rest `floor(dim / num_parts)`. With [`SplitStrategy::Random`] the
/// indices are drawn from a permutation seeded by `seed`; each part is kept
/// sorted so that column gathers stay in memory order.
pub fn split_features(
    dim: usize,
    num_parts: usize,
    strategy: SplitStrategy,
    seed: u64,
) -> Result<SubFeaturePartition> {
    if num_parts < 1 {
        return Err(Error::param("L", "must be at least 1"));
    }
    if num_parts > dim {
        return Err(Error::param(
            "L",
            format!("must not exceed the feature dimension ({num_parts} > {dim})"),
        ));
    }
    let mut order: Vec<usize> = (0..dim).collect();
    if strategy == SplitStrategy::Random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
    }
    let base = dim / num_parts;
    let extra = dim % num_parts;
    let mut parts = Vec::with_capacity(num_parts);
    let mut start = 0;
    for l in 0..num_parts {
        let size = base + usize::from(l < extra);
        let mut part = order[start..start + size].to_vec();
        part.sort_unstable();
        parts.push(part);
        start += size;
    }
    Ok(SubFeaturePartition { parts, dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ten_into_three() {
        let p = split_features(10, 3, SplitStrategy::Contiguous, 0).unwrap();
        assert_eq!(p.sizes(), [4, 3, 3]);
        assert_eq!(p.parts()[0], [0, 1, 2, 3]);
        assert_eq!(p.parts()[1], [4, 5, 6]);
        assert_eq!(p.parts()[2], [7, 8, 9]);
    }

    #[test]
    fn resnet_default() {
        let p = split_features(2048, 11, SplitStrategy::Contiguous, 0).unwrap();
        assert_eq!(
            p.sizes(),
            [187, 187, 186, 186, 186, 186, 186, 186, 186, 186, 186]
        );
    }

    #[test]
    fn single_part_is_identity() {
        for strategy in [SplitStrategy::Contiguous, SplitStrategy::Random] {
            let p = split_features(8, 1, strategy, 99).unwrap();
            assert_eq!(p.parts(), &[(0..8).collect::<Vec<_>>()]);
        }
    }

    #[test]
    fn random_is_seeded() {
        let a = split_features(64, 5, SplitStrategy::Random, 7).unwrap();
        let b = split_features(64, 5, SplitStrategy::Random, 7).unwrap();
        let c = split_features(64, 5, SplitStrategy::Random, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn out_of_range_parts() {
        assert!(split_features(4, 0, SplitStrategy::Contiguous, 0).is_err());
        assert!(split_features(4, 5, SplitStrategy::Contiguous, 0).is_err());
    }

    proptest! {
        #[test]
        fn partition_invariants(dim in 1usize..300, frac in 0.0f64..1.0, seed: u64, random: bool) {
            let l = 1 + ((dim - 1) as f64 * frac) as usize;
            let strategy = if random { SplitStrategy::Random } else { SplitStrategy::Contiguous };
            let p = split_features(dim, l, strategy, seed).unwrap();
            prop_assert_eq!(p.len(), l);
            let sizes = p.sizes();
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            let mut all: Vec<usize> = p.parts().iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..dim).collect::<Vec<_>>());
        }
    }
}
