use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, ParamViolation, Result};
use crate::evaluation::{GroundTruth, Label};
use crate::matrix::{FeatureMatrix, Matrix, Role};
use crate::scalar::Scalar;

/// Clustered identities for desk-scale experiments.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SyntheticSpec {
    pub n_ids: usize,
    pub per_id: usize,
    pub dim: usize,
    /// Noise amplitude; the noise vector has expected norm about `2 * noise`.
    pub noise: f64,
    pub n_cameras: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if self.n_ids < 2 {
            v.push(ParamViolation::new("ids", "must be at least 2"));
        }
        if self.per_id < 2 {
            v.push(ParamViolation::new("per-id", "must be at least 2"));
        }
        if self.n_cameras < 2 {
            v.push(ParamViolation::new("cameras", "must be at least 2"));
        }
        if self.dim < 1 {
            v.push(ParamViolation::new("dim", "must be at least 1"));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            v.push(ParamViolation::new("noise", "must be finite and nonnegative"));
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }
}

/// Probes, galleries and their labels drawn from [`SyntheticSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData<T> {
    pub probes: FeatureMatrix<T>,
    pub galleries: FeatureMatrix<T>,
    pub probe_truth: GroundTruth,
    pub gallery_truth: GroundTruth,
}

/// Each identity gets a uniformly random unit-sphere centre; its samples
/// add isotropic Gaussian noise with per-coordinate deviation
/// `2 * noise / sqrt(dim)`, so `noise = 0.6` leaves clusters overlapping but
/// mostly recoverable. Sample `s` of an identity is seen by camera
/// `s % n_cameras`; sample 0 is the probe, the rest go to the gallery.
pub fn generate_synthetic<T: Scalar>(spec: &SyntheticSpec) -> Result<SyntheticData<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sigma = 2.0 * spec.noise / (spec.dim as f64).sqrt();
    let mut probes = Vec::with_capacity(spec.n_ids * spec.dim);
    let mut galleries = Vec::with_capacity(spec.n_ids * (spec.per_id - 1) * spec.dim);
    let mut probe_labels = Vec::new();
    let mut gallery_labels = Vec::new();

    for id in 0..spec.n_ids {
        let mut center: Vec<f64> = (0..spec.dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = center.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            center.iter_mut().for_each(|v| *v /= norm);
        }
        for s in 0..spec.per_id {
            let sample = center.iter().map(|&c| {
                let z: f64 = StandardNormal.sample(&mut rng);
                T::of(c + sigma * z)
            });
            let label = Label {
                person_id: id as i64,
                camera_id: (s % spec.n_cameras) as i64,
            };
            if s == 0 {
                probes.extend(sample);
                probe_labels.push(label);
            } else {
                galleries.extend(sample);
                gallery_labels.push(label);
            }
        }
    }
    let n_g = gallery_labels.len();
    Ok(SyntheticData {
        probes: FeatureMatrix::new(Matrix::from_vec(spec.n_ids, spec.dim, probes)?, Role::Probe)?,
        galleries: FeatureMatrix::new(Matrix::from_vec(n_g, spec.dim, galleries)?, Role::Gallery)?,
        probe_truth: GroundTruth::new(probe_labels),
        gallery_truth: GroundTruth::new(gallery_labels),
    })
}
