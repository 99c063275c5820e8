//! Divide-and-fuse re-ranking for person re-identification and instance
//! retrieval.
//!
//! A feature is split into `L` sub-features. For each one, every probe and
//! gallery entity is encoded as a sparse vector of rank-based contextual
//! similarities to its nearest galleries, enhanced with its neighbours'
//! encodings, and the distances are iteratively renewed from the Jaccard
//! distance of those encodings. The per-sub-feature encodings are fused by a
//! power mean and galleries are finally ranked by generalized Jaccard
//! distance through an inverted index.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the usual `f64` choice.

pub mod distance;
pub mod division;
pub mod encoding;
pub mod error;
pub mod evaluation;
pub mod fusion;
pub mod io;
pub mod jaccard;
pub mod matrix;
pub mod params;
pub mod pipeline;
pub mod ranks;
pub mod run;
pub mod scalar;
pub mod sparse;
pub mod synthetic;

pub use distance::compute_initial_distances;
pub use division::{split_features, SubFeaturePartition};
pub use encoding::{contextual_similarity, encode_all, encode_vector, neighbor_enhance, Encodings};
pub use error::{Error, ParamViolation, Result};
pub use evaluation::{
    average_precision, compute_metrics, protocol_filter, GroundTruth, Label, Metrics, ProbeFilter,
};
pub use fusion::fuse;
pub use io::{load_features, load_labels, save_features, FeatureFormat};
pub use jaccard::{batch_jaccard, build_inverted_index, jaccard_distance, InvertedIndex};
pub use matrix::{DistanceField, FeatureMatrix, Matrix, Role};
pub use params::{Metric, ReRankParams, SplitStrategy};
pub use pipeline::{
    aggregate_distance, initial_ranking, iterate_subfeature, rank_against, rerank, rerank_detailed,
    RankingResult, ReRankOutput, SubFeatureOutcome,
};
pub use ranks::{build_rank_tables, Entity, RankTable};
pub use run::{run, RunConfig, RunSummary};
pub use scalar::Scalar;
pub use sparse::{EncodedVector, FusedVector, SparseVector};
pub use synthetic::{generate_synthetic, SyntheticData, SyntheticSpec};

pub type Features = FeatureMatrix<f64>;
pub type Features32 = FeatureMatrix<f32>;
pub type Distances = DistanceField<f64>;
pub type Distances32 = DistanceField<f32>;
pub type Sparse = SparseVector<f64>;
pub type Sparse32 = SparseVector<f32>;
pub type Index = InvertedIndex<f64>;
pub type Index32 = InvertedIndex<f32>;
pub type Ranking = RankingResult<f64>;
pub type Ranking32 = RankingResult<f32>;
