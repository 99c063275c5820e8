//! Re-identification scoring: CMC at ranks 1/5/10/20 and mean average
//! precision, with Market-1501 style junk handling (gallery items sharing
//! both identity and camera with the probe are skipped, not penalized).

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pipeline::RankingResult;
use crate::scalar::Scalar;

pub const CMC_RANKS: [usize; 4] = [1, 5, 10, 20];

/// Identity and camera of one entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Label {
    pub person_id: i64,
    pub camera_id: i64,
}

/// Labels of a set of entities, in row order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    labels: Vec<Label>,
}

impl GroundTruth {
    pub fn new(labels: Vec<Label>) -> Self {
        Self { labels }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(person_id, camera_id)| Label {
                    person_id,
                    camera_id,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Splits a concatenated probe-then-gallery label list.
    pub fn split_at(&self, n_probes: usize) -> (GroundTruth, GroundTruth) {
        let (p, g) = self.labels.split_at(n_probes);
        (GroundTruth::new(p.to_vec()), GroundTruth::new(g.to_vec()))
    }
}

/// Which gallery items count for one probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeFilter {
    /// Same identity, different camera.
    pub relevant: HashSet<usize>,
    /// Same identity and camera; ignored when scoring.
    pub skipped: HashSet<usize>,
}

impl ProbeFilter {
    /// Gallery ids that take part in scoring, ascending.
    pub fn valid(&self, gallery_len: usize) -> Vec<usize> {
        (0..gallery_len).filter(|i| !self.skipped.contains(i)).collect()
    }
}

/// Classifies the gallery for `probe`; fails if no cross-camera match exists.
pub fn protocol_filter(probe_index: usize, probe: Label, gallery: &GroundTruth) -> Result<ProbeFilter> {
    let mut relevant = HashSet::new();
    let mut skipped = HashSet::new();
    for (i, g) in gallery.labels().iter().enumerate() {
        if g.person_id == probe.person_id {
            if g.camera_id == probe.camera_id {
                skipped.insert(i);
            } else {
                relevant.insert(i);
            }
        }
    }
    if relevant.is_empty() {
        return Err(Error::Unevaluable { probe: probe_index });
    }
    Ok(ProbeFilter { relevant, skipped })
}

/// Average precision and the effective rank of the first hit.
fn score_ranking(
    ranked: &[u32],
    relevant: &HashSet<usize>,
    skipped: &HashSet<usize>,
) -> Option<(f64, usize)> {
    if relevant.is_empty() {
        return None;
    }
    let mut effective = 0usize;
    let mut hits = 0usize;
    let mut precision_sum = 0.0;
    let mut first_hit = None;
    for &g in ranked {
        let g = g as usize;
        if skipped.contains(&g) {
            continue;
        }
        effective += 1;
        if relevant.contains(&g) {
            hits += 1;
            precision_sum += hits as f64 / effective as f64;
            first_hit.get_or_insert(effective);
            if hits == relevant.len() {
                break;
            }
        }
    }
    Some((precision_sum / relevant.len() as f64, first_hit.unwrap_or(usize::MAX)))
}

/// Non-interpolated AP over effective ranks (skipped items removed).
pub fn average_precision(
    ranked: &[u32],
    relevant: &HashSet<usize>,
    skipped: &HashSet<usize>,
) -> Result<f64> {
    score_ranking(ranked, relevant, skipped)
        .map(|(ap, _)| ap)
        .ok_or_else(|| Error::InvalidData("average precision needs a relevant item".into()))
}

/// CMC and mAP for a ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub cmc: BTreeMap<usize, f64>,
    pub map_score: f64,
    /// `None` for unevaluable probes.
    pub per_query_ap: Vec<Option<f64>>,
}

impl Metrics {
    pub fn evaluable(&self) -> usize {
        self.per_query_ap.iter().flatten().count()
    }

    pub fn rank(&self, k: usize) -> f64 {
        self.cmc.get(&k).copied().unwrap_or(f64::NAN)
    }
}

pub fn compute_metrics<T: Scalar>(
    result: &RankingResult<T>,
    probes: &GroundTruth,
    gallery: &GroundTruth,
) -> Result<Metrics> {
    if result.probe_count() != probes.len() {
        return Err(Error::Shape {
            context: "ranking rows vs probe labels",
            expected: probes.len(),
            found: result.probe_count(),
        });
    }
    let mut per_query_ap = Vec::with_capacity(probes.len());
    let mut first_hits = Vec::new();
    for p in 0..probes.len() {
        let Ok(filter) = protocol_filter(p, probes.get(p), gallery) else {
            per_query_ap.push(None);
            continue;
        };
        let (ap, first) = score_ranking(result.order(p), &filter.relevant, &filter.skipped)
            .expect("filter guarantees a relevant item");
        per_query_ap.push(Some(ap));
        first_hits.push(first);
    }
    let n = first_hits.len();
    if n == 0 {
        return Err(Error::NoEvaluableProbes);
    }
    let cmc = CMC_RANKS
        .iter()
        .map(|&k| (k, first_hits.iter().filter(|&&r| r <= k).count() as f64 / n as f64))
        .collect();
    let map_score = per_query_ap.iter().flatten().sum::<f64>() / n as f64;
    Ok(Metrics {
        cmc,
        map_score,
        per_query_ap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> HashSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn filter_rules() {
        let gallery = GroundTruth::from_pairs(&[(5, 1), (5, 2), (7, 1)]);
        let probe = Label {
            person_id: 5,
            camera_id: 1,
        };
        let f = protocol_filter(0, probe, &gallery).unwrap();
        assert_eq!(f.skipped, set(&[0]));
        assert_eq!(f.relevant, set(&[1]));
        assert_eq!(f.valid(3), vec![1, 2]);

        let clean = GroundTruth::from_pairs(&[(5, 2), (7, 1)]);
        assert_eq!(protocol_filter(0, probe, &clean).unwrap().valid(2), vec![0, 1]);

        let same_cam_only = GroundTruth::from_pairs(&[(5, 1), (7, 2)]);
        assert!(matches!(
            protocol_filter(3, probe, &same_cam_only),
            Err(Error::Unevaluable { probe: 3 })
        ));
    }

    #[test]
    fn ap_cases() {
        let none = HashSet::new();
        assert_eq!(average_precision(&[0, 1, 2], &set(&[0, 1]), &none).unwrap(), 1.0);
        assert_eq!(average_precision(&[0, 1, 2], &set(&[1]), &none).unwrap(), 0.5);
        let ap = average_precision(&[4, 9, 3, 1], &set(&[4, 3]), &none).unwrap();
        assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        // a skipped item ahead of the hit does not count
        assert_eq!(average_precision(&[7, 1, 2], &set(&[1]), &set(&[7])).unwrap(), 1.0);
        assert!(average_precision(&[0, 1], &none, &none).is_err());
    }

    #[test]
    fn metrics_average_and_unevaluable() {
        let gallery = GroundTruth::from_pairs(&[(1, 2), (2, 2), (3, 1)]);
        let probes = GroundTruth::from_pairs(&[(1, 1), (2, 1), (3, 1)]);
        let result = RankingResult::from_distances(vec![
            vec![0.2, 0.1, 0.9],
            vec![0.5, 0.1, 0.9],
            vec![0.1, 0.2, 0.3],
        ]);
        let m = compute_metrics(&result, &probes, &gallery).unwrap();
        assert_eq!(m.per_query_ap, vec![Some(0.5), Some(1.0), None]);
        assert_eq!(m.map_score, 0.75);
        assert_eq!(m.rank(1), 0.5);
        assert_eq!(m.rank(5), 1.0);
        assert_eq!(m.evaluable(), 2);

        let hopeless = GroundTruth::from_pairs(&[(3, 1), (3, 1), (3, 1)]);
        assert!(matches!(
            compute_metrics(&result, &hopeless, &gallery),
            Err(Error::NoEvaluableProbes)
        ));
    }
}
