//! Generalized Jaccard distance between nonnegative sparse vectors, and an
//! inverted index that evaluates it against a whole gallery at once.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVector;

/// `1 - sum(min) / sum(max)` over the union support; two all-zero vectors
/// are at distance 1.
pub fn jaccard_distance<T: Scalar>(a: &SparseVector<T>, b: &SparseVector<T>) -> T {
    let (ai, av) = (a.indices(), a.values());
    let (bi, bv) = (b.indices(), b.values());
    let (mut x, mut y) = (0, 0);
    let mut min_sum = T::zero();
    let mut max_sum = T::zero();
    while x < ai.len() && y < bi.len() {
        match ai[x].cmp(&bi[y]) {
            std::cmp::Ordering::Less => {
                max_sum += av[x];
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                max_sum += bv[y];
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                min_sum += av[x].min(bv[y]);
                max_sum += av[x].max(bv[y]);
                x += 1;
                y += 1;
            }
        }
    }
    max_sum += av[x..].iter().copied().sum::<T>();
    max_sum += bv[y..].iter().copied().sum::<T>();
    ratio_distance(min_sum, max_sum)
}

#[inline]
fn ratio_distance<T: Scalar>(min_sum: T, max_sum: T) -> T {
    if max_sum <= T::zero() {
        return T::one();
    }
    (T::one() - min_sum / max_sum).max(T::zero()).min(T::one())
}

/// Coordinate postings over a finalized set of gallery vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex<T> {
    dim: usize,
    postings: Vec<Vec<(u32, T)>>,
    norms: Vec<T>,
}

impl<T: Scalar> InvertedIndex<T> {
    /// Number of indexed entities.
    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(entity, value)` pairs for coordinate `j`, in ascending entity order.
    pub fn postings(&self, j: usize) -> &[(u32, T)] {
        &self.postings[j]
    }

    pub fn norms(&self) -> &[T] {
        &self.norms
    }

    pub fn total_postings(&self) -> usize {
        self.postings.iter().map(Vec::len).sum()
    }

    /// Coordinates that have at least one posting.
    pub fn active_coordinates(&self) -> Vec<usize> {
        (0..self.dim).filter(|&j| !self.postings[j].is_empty()).collect()
    }
}

/// Indexes `vectors` by coordinate; entity ids are positions in the slice.
pub fn build_inverted_index<T: Scalar>(vectors: &[SparseVector<T>]) -> Result<InvertedIndex<T>> {
    let dim = vectors.first().map_or(0, SparseVector::dim);
    let mut postings = vec![Vec::new(); dim];
    let mut norms = Vec::with_capacity(vectors.len());
    for (e, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::Shape {
                context: "indexed vector dimension",
                expected: dim,
                found: v.dim(),
            });
        }
        for (j, x) in v.iter() {
            postings[j as usize].push((e as u32, x));
        }
        norms.push(v.sum());
    }
    Ok(InvertedIndex {
        dim,
        postings,
        norms,
    })
}

/// Jaccard distance from `query` to every indexed entity.
///
/// Only the postings of the query's support are visited; `sum(max)` is
/// recovered as `sum(a) + sum(b) - sum(min)`. Entities sharing no coordinate
/// with the query get exactly 1 without further work.
pub fn batch_jaccard<T: Scalar>(query: &SparseVector<T>, index: &InvertedIndex<T>) -> Result<Vec<T>> {
    if query.dim() != index.dim() {
        return Err(Error::Shape {
            context: "query dimension",
            expected: index.dim(),
            found: query.dim(),
        });
    }
    let n = index.len();
    let mut out = vec![T::one(); n];
    if query.is_empty() {
        return Ok(out);
    }
    let mut min_sums = vec![T::zero(); n];
    let mut touched: Vec<u32> = Vec::new();
    for (j, a) in query.iter() {
        for &(e, b) in &index.postings[j as usize] {
            let slot = &mut min_sums[e as usize];
            if *slot == T::zero() {
                touched.push(e);
            }
            *slot += a.min(b);
        }
    }
    let q_norm = query.sum();
    for e in touched {
        let e = e as usize;
        let min_sum = min_sums[e];
        let max_sum = q_norm + index.norms[e] - min_sum;
        out[e] = ratio_distance(min_sum, max_sum);
    }
    Ok(out)
}
