use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nonnegative sparse vector over gallery coordinates.
///
/// Indices are strictly increasing and every stored value is strictly
/// positive; absent coordinates are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<T> {
    dim: usize,
    indices: Vec<u32>,
    values: Vec<T>,
}

/// Contextual encoding of one entity for one sub-feature.
pub type EncodedVector<T> = SparseVector<T>;
/// Power-mean fusion of an entity's encodings across sub-features.
pub type FusedVector<T> = SparseVector<T>;

impl<T: Scalar> SparseVector<T> {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(index, value)` pairs; pairs are sorted, zero values
    /// dropped. Duplicate indices, negative or non-finite values and
    /// out-of-range indices are rejected.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(u32, T)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        let mut out = Self::empty(dim);
        for (i, v) in pairs {
            if i as usize >= dim {
                return Err(Error::InvalidData(format!(
                    "sparse index {i} out of range for dimension {dim}"
                )));
            }
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidData(format!(
                    "sparse value at {i} must be finite and nonnegative, got {v}"
                )));
            }
            if out.indices.last() == Some(&i) {
                return Err(Error::InvalidData(format!("duplicate sparse index {i}")));
            }
            if v > T::zero() {
                out.indices.push(i);
                out.values.push(v);
            }
        }
        Ok(out)
    }

    /// Trusted constructor for already sorted, positive entries.
    pub(crate) fn from_sorted_unchecked(dim: usize, indices: Vec<u32>, values: Vec<T>) -> Self {
        debug_assert_eq!(indices.len(), values.len());
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(values.iter().all(|&v| v > T::zero()));
        Self {
            dim,
            indices,
            values,
        }
    }

    pub fn from_dense(dense: &[T]) -> Result<Self> {
        let pairs = dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != T::zero())
            .map(|(i, &v)| (i as u32, v))
            .collect();
        Self::from_pairs(dense.len(), pairs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) coordinates.
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, j: usize) -> T {
        match self.indices.binary_search(&(j as u32)) {
            Ok(pos) => self.values[pos],
            Err(_) => T::zero(),
        }
    }

    /// Sum of all stored values, accumulated in index order.
    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc.max(v))
    }

    pub fn to_dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, v) in self.iter() {
            out[i as usize] = v;
        }
        out
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            indices: self.indices.clone(),
            values: self.values.iter().map(|&v| v * factor).collect(),
        }
    }
}
