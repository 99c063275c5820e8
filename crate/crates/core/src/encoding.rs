//! Rank-based contextual encoding of an entity's neighbourhood and the
//! neighbour enhancement that averages it with its closest galleries.

use rayon::prelude::*;

use crate::ranks::{Entity, RankTable};
use crate::scalar::Scalar;
use crate::sparse::{EncodedVector, SparseVector};

/// Similarity of `entity` to gallery item `j` read off the rank tables:
///
/// `1 / R_x(g_j) + sum over m in top-k1(x) of 1 / (R_{g_m}(g_j) * (1 + R_x(g_m)))`.
///
/// The sum runs over `m = j` too when `g_j` is one of the `k1` nearest.
pub fn contextual_similarity<T: Scalar>(
    ranks: &RankTable,
    entity: Entity,
    j: usize,
    k1: usize,
) -> T {
    let direct = T::one() / T::of(ranks.rank(entity, j) as f64);
    let context = ranks
        .top(entity, k1)
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (pos, &m)| {
            // pos is 0-based so R_x(g_m) = pos + 1
            let r_m = ranks.rank(Entity::Gallery(m as usize), j);
            acc + T::one() / (T::of(r_m as f64) * T::of(pos as f64 + 2.0))
        });
    direct + context
}

/// Encodes an entity as the similarities to its `k1` nearest gallery items;
/// every other coordinate is zero.
pub fn encode_vector<T: Scalar>(ranks: &RankTable, entity: Entity, k1: usize) -> EncodedVector<T> {
    let mut indices: Vec<u32> = ranks.top(entity, k1).to_vec();
    indices.sort_unstable();
    let values = indices
        .iter()
        .map(|&j| contextual_similarity(ranks, entity, j as usize, k1))
        .collect();
    SparseVector::from_sorted_unchecked(ranks.gallery_count(), indices, values)
}

/// Averages `own` with the pre-enhancement encodings of the entity's `k2`
/// nearest galleries: `(own + sum of neighbours) / (1 + k2)`.
///
/// For a gallery entity the nearest neighbour is itself, so its own
/// encoding enters twice. `k2 = 0` returns `own` unchanged.
pub fn neighbor_enhance<T: Scalar>(
    own: &EncodedVector<T>,
    gallery_vectors: &[EncodedVector<T>],
    ranks: &RankTable,
    entity: Entity,
    k2: usize,
) -> EncodedVector<T> {
    let neighbours = ranks.top(entity, k2);
    let mut pairs: Vec<(u32, T)> = own.iter().collect();
    for &g in neighbours {
        pairs.extend(gallery_vectors[g as usize].iter());
    }
    // stable: equal indices keep their summation order (own, then by rank)
    pairs.sort_by_key(|&(i, _)| i);

    let weight = T::of((1 + k2) as f64);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut iter = pairs.into_iter().peekable();
    while let Some((i, v)) = iter.next() {
        let mut acc = v;
        while let Some(&(_, w)) = iter.peek().filter(|(n, _)| *n == i) {
            acc += w;
            iter.next();
        }
        indices.push(i);
        values.push(acc / weight);
    }
    SparseVector::from_sorted_unchecked(own.dim(), indices, values)
}

/// Enhanced encodings of every probe and gallery entity for one sub-feature.
#[derive(Debug, Clone, PartialEq)]
pub struct Encodings<T> {
    pub probes: Vec<EncodedVector<T>>,
    pub galleries: Vec<EncodedVector<T>>,
}

/// Encodes all entities, then enhances them against a frozen snapshot of the
/// raw gallery encodings.
pub fn encode_all<T: Scalar>(ranks: &RankTable, k1: usize, k2: usize) -> Encodings<T> {
    let n_g = ranks.gallery_count();
    let n_p = ranks.probe_count();
    let raw_gallery: Vec<EncodedVector<T>> = (0..n_g)
        .into_par_iter()
        .map(|i| encode_vector(ranks, Entity::Gallery(i), k1))
        .collect();
    let galleries = (0..n_g)
        .into_par_iter()
        .map(|i| neighbor_enhance(&raw_gallery[i], &raw_gallery, ranks, Entity::Gallery(i), k2))
        .collect();
    let probes = (0..n_p)
        .into_par_iter()
        .map(|p| {
            let raw = encode_vector(ranks, Entity::Probe(p), k1);
            neighbor_enhance(&raw, &raw_gallery, ranks, Entity::Probe(p), k2)
        })
        .collect();
    Encodings { probes, galleries }
}
