//! End-to-end divide-and-fuse re-ranking.
//!
//! Each sub-feature is encoded independently for `T` passes, renewing its
//! distances between passes with the Jaccard distance of the current
//! encodings. The final encodings of every entity are fused across
//! sub-features and galleries are ranked by Jaccard distance to the fused
//! probe vector.

use rayon::prelude::*;

use crate::distance::{compute_initial_distances, half_euclidean, normalized_rows};
use crate::division::split_features;
use crate::encoding::{encode_all, Encodings};
use crate::error::{Error, Result};
use crate::fusion::fuse;
use crate::jaccard::{batch_jaccard, build_inverted_index};
use crate::matrix::{DistanceField, FeatureMatrix, Matrix};
use crate::params::ReRankParams;
use crate::ranks::{argsort_row, build_rank_tables};
use crate::scalar::Scalar;
use crate::sparse::FusedVector;

/// Gallery ordering for every probe.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult<T> {
    orders: Vec<Vec<u32>>,
    distances: Vec<Vec<T>>,
}

impl<T: Scalar> RankingResult<T> {
    /// Sorts each row of distances ascending, ties by gallery id.
    pub fn from_distances(distances: Vec<Vec<T>>) -> Self {
        let orders = distances.par_iter().map(|row| argsort_row(row)).collect();
        Self { orders, distances }
    }

    pub fn probe_count(&self) -> usize {
        self.orders.len()
    }

    /// Gallery ids for probe `p`, best first.
    pub fn order(&self, p: usize) -> &[u32] {
        &self.orders[p]
    }

    /// Final distance from probe `p` to every gallery id.
    pub fn distances(&self, p: usize) -> &[T] {
        &self.distances[p]
    }

    pub fn top_k(&self, p: usize, k: usize) -> &[u32] {
        let o = &self.orders[p];
        &o[..k.min(o.len())]
    }
}

/// `(1 - lambda) * d + lambda * d_hat`.
#[inline]
pub fn aggregate_distance<T: Scalar>(d: T, d_hat: T, lambda: T) -> T {
    (T::one() - lambda) * d + lambda * d_hat
}

/// Outcome of the iterative encoding of one sub-feature.
#[derive(Debug, Clone, PartialEq)]
pub struct SubFeatureOutcome<T> {
    /// Encodings from the last pass.
    pub encodings: Encodings<T>,
    /// Distances the last pass was encoded from.
    pub distances: DistanceField<T>,
}

fn renew_distances<T: Scalar>(
    dist: &mut DistanceField<T>,
    encodings: &Encodings<T>,
    lambda: T,
) -> Result<()> {
    let index = build_inverted_index(&encodings.galleries)?;
    let qg: Vec<Vec<T>> = encodings
        .probes
        .par_iter()
        .map(|v| batch_jaccard(v, &index))
        .collect::<Result<_>>()?;
    let gg: Vec<Vec<T>> = encodings
        .galleries
        .par_iter()
        .map(|v| batch_jaccard(v, &index))
        .collect::<Result<_>>()?;

    for (p, row) in qg.iter().enumerate() {
        for (d, &h) in dist.query_gallery.row_mut(p).iter_mut().zip(row) {
            *d = aggregate_distance(*d, h, lambda);
        }
    }
    let n = dist.gallery_count();
    let half = T::of(0.5);
    let mut next = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let a = aggregate_distance(dist.gallery_gallery.get(i, j), gg[i][j], lambda);
            let b = aggregate_distance(dist.gallery_gallery.get(j, i), gg[j][i], lambda);
            let v = ((a + b) * half).max(T::zero()).min(T::one());
            next.set(i, j, v);
            next.set(j, i, v);
        }
    }
    dist.gallery_gallery = next;
    Ok(())
}

/// Runs `params.iterations` encoding passes on one sub-feature.
///
/// Between passes both the probe and gallery distances are renewed with the
/// Jaccard distances of the current encodings; the gallery block is then
/// re-symmetrized with a zero diagonal.
pub fn iterate_subfeature<T: Scalar>(
    initial: DistanceField<T>,
    params: &ReRankParams,
) -> Result<SubFeatureOutcome<T>> {
    let violations = params.violations();
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }
    initial.validate()?;
    let n_g = initial.gallery_count();
    if params.k1 >= n_g {
        return Err(Error::param(
            "k1",
            format!("must be smaller than the gallery size ({} >= {n_g})", params.k1),
        ));
    }
    let lambda = T::of(params.lambda);
    let mut dist = initial;
    let mut pass = 1;
    loop {
        let ranks = build_rank_tables(&dist);
        let encodings = encode_all(&ranks, params.k1, params.k2);
        if pass == params.iterations {
            return Ok(SubFeatureOutcome {
                encodings,
                distances: dist,
            });
        }
        renew_distances(&mut dist, &encodings, lambda)?;
        pass += 1;
    }
}

/// Fused vectors alongside the final ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct ReRankOutput<T> {
    pub ranking: RankingResult<T>,
    pub fused_probes: Vec<FusedVector<T>>,
    pub fused_galleries: Vec<FusedVector<T>>,
}

fn check_inputs<T: Scalar>(probes: &FeatureMatrix<T>, galleries: &FeatureMatrix<T>) -> Result<()> {
    if probes.dim() != galleries.dim() {
        return Err(Error::Shape {
            context: "probe/gallery feature dimension",
            expected: galleries.dim(),
            found: probes.dim(),
        });
    }
    Ok(())
}

/// Re-ranks the gallery for every probe and keeps the fused vectors.
pub fn rerank_detailed<T: Scalar>(
    probes: &FeatureMatrix<T>,
    galleries: &FeatureMatrix<T>,
    params: &ReRankParams,
) -> Result<ReRankOutput<T>> {
    check_inputs(probes, galleries)?;
    params.validate(galleries.dim(), galleries.count())?;

    let partition = split_features(
        galleries.dim(),
        params.num_parts,
        params.split,
        params.seed,
    )?;
    let per_part: Vec<Encodings<T>> = partition
        .parts()
        .par_iter()
        .map(|cols| {
            let p = probes.select_columns(cols);
            let g = galleries.select_columns(cols);
            let field = compute_initial_distances(&p, &g)?;
            iterate_subfeature(field, params).map(|o| o.encodings)
        })
        .collect::<Result<_>>()?;

    let fuse_entity = |pick: &dyn Fn(&Encodings<T>) -> &FusedVector<T>| {
        let vs: Vec<FusedVector<T>> = per_part.iter().map(|e| pick(e).clone()).collect();
        fuse(&vs, params.alpha)
    };
    let fused_galleries: Vec<FusedVector<T>> = (0..galleries.count())
        .map(|i| fuse_entity(&|e| &e.galleries[i]))
        .collect::<Result<_>>()?;
    let fused_probes: Vec<FusedVector<T>> = (0..probes.count())
        .map(|p| fuse_entity(&|e| &e.probes[p]))
        .collect::<Result<_>>()?;

    let ranking = rank_against(&fused_probes, &fused_galleries)?;
    Ok(ReRankOutput {
        ranking,
        fused_probes,
        fused_galleries,
    })
}

/// Ranks galleries for each query by Jaccard distance through an inverted index.
pub fn rank_against<T: Scalar>(
    queries: &[FusedVector<T>],
    galleries: &[FusedVector<T>],
) -> Result<RankingResult<T>> {
    let index = build_inverted_index(galleries)?;
    let distances = queries
        .par_iter()
        .map(|q| batch_jaccard(q, &index))
        .collect::<Result<_>>()?;
    Ok(RankingResult::from_distances(distances))
}

/// Divide-and-fuse re-ranking of `galleries` for every probe.
pub fn rerank<T: Scalar>(
    probes: &FeatureMatrix<T>,
    galleries: &FeatureMatrix<T>,
    params: &ReRankParams,
) -> Result<RankingResult<T>> {
    rerank_detailed(probes, galleries, params).map(|o| o.ranking)
}

/// Baseline ranking by normalized Euclidean distance on the whole feature.
pub fn initial_ranking<T: Scalar>(
    probes: &FeatureMatrix<T>,
    galleries: &FeatureMatrix<T>,
) -> Result<RankingResult<T>> {
    check_inputs(probes, galleries)?;
    let p = normalized_rows(probes);
    let g = normalized_rows(galleries);
    let distances = (0..p.rows())
        .into_par_iter()
        .map(|i| g.iter_rows().map(|gr| half_euclidean(p.row(i), gr)).collect())
        .collect();
    Ok(RankingResult::from_distances(distances))
}
