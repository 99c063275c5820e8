//! The command-line driver: load or synthesize data, rank with the baseline
//! and with re-ranking, score both, and write the results atomically.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, ParamViolation, Result};
use crate::evaluation::{compute_metrics, GroundTruth, Metrics};
use crate::io::{load_features, load_labels, FeatureFormat};
use crate::matrix::{FeatureMatrix, Role};
use crate::params::ReRankParams;
use crate::pipeline::{initial_ranking, rerank, RankingResult};
use crate::synthetic::{generate_synthetic, SyntheticSpec};

pub const METRICS_FILE: &str = "metrics.json";
pub const RANKINGS_FILE: &str = "rankings.tsv";
pub const CONFIG_FILE: &str = "config.json";

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ReRankParams,
    pub probe_features: Option<PathBuf>,
    pub gallery_features: Option<PathBuf>,
    /// Probe labels followed by gallery labels.
    pub labels: Option<PathBuf>,
    pub format: FeatureFormat,
    pub out: PathBuf,
    pub topk: usize,
    /// When set, data comes from the generator instead of files.
    pub synthetic: Option<SyntheticSpec>,
}

impl RunConfig {
    pub fn violations(&self) -> Vec<ParamViolation> {
        let mut v = self.params.violations();
        if self.topk < 1 {
            v.push(ParamViolation::new("topk", "must be at least 1"));
        }
        if self.synthetic.is_none() {
            if self.probe_features.is_none() {
                v.push(ParamViolation::new(
                    "probe-features",
                    "required unless --synthetic is given",
                ));
            }
            if self.gallery_features.is_none() {
                v.push(ParamViolation::new(
                    "gallery-features",
                    "required unless --synthetic is given",
                ));
            }
        }
        v
    }
}

#[derive(Debug, Serialize)]
struct MetricBlock {
    rank1: f64,
    rank5: f64,
    rank10: f64,
    rank20: f64,
    #[serde(rename = "mAP")]
    map: f64,
}

impl From<&Metrics> for MetricBlock {
    fn from(m: &Metrics) -> Self {
        Self {
            rank1: m.rank(1),
            rank5: m.rank(5),
            rank10: m.rank(10),
            rank20: m.rank(20),
            map: m.map_score,
        }
    }
}

#[derive(Debug, Serialize)]
struct MetricsDocument {
    evaluable_probes: usize,
    baseline: MetricBlock,
    daf: MetricBlock,
}

/// Scores of a finished run, when labels were available.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub baseline: Option<Metrics>,
    pub daf: Option<Metrics>,
    pub out: PathBuf,
}

struct Dataset {
    probes: FeatureMatrix<f64>,
    galleries: FeatureMatrix<f64>,
    truth: Option<(GroundTruth, GroundTruth)>,
}

fn load_dataset(config: &RunConfig) -> Result<Dataset> {
    if let Some(spec) = &config.synthetic {
        let data = generate_synthetic::<f64>(spec)?;
        return Ok(Dataset {
            probes: data.probes,
            galleries: data.galleries,
            truth: Some((data.probe_truth, data.gallery_truth)),
        });
    }
    let probe_path = config.probe_features.as_deref().expect("validated");
    let gallery_path = config.gallery_features.as_deref().expect("validated");
    let probes = load_features(probe_path, config.format, Role::Probe)?;
    let galleries = load_features(gallery_path, config.format, Role::Gallery)?;
    let truth = match &config.labels {
        None => None,
        Some(path) => {
            let all = load_labels(path)?;
            let expected = probes.count() + galleries.count();
            if all.len() != expected {
                return Err(Error::Load {
                    path: path.clone(),
                    location: format!("line {}", all.len() + 1),
                    reason: format!(
                        "{} labels for {} probes + {} galleries",
                        all.len(),
                        probes.count(),
                        galleries.count()
                    ),
                });
            }
            Some(all.split_at(probes.count()))
        }
    };
    Ok(Dataset {
        probes,
        galleries,
        truth,
    })
}

/// One line per probe: `probe_index\tg1 g2 ... gK`.
pub fn format_rankings<T: crate::Scalar>(ranking: &RankingResult<T>, topk: usize) -> String {
    let mut out = String::new();
    for p in 0..ranking.probe_count() {
        let ids: Vec<String> = ranking.top_k(p, topk).iter().map(u32::to_string).collect();
        writeln!(out, "{p}\t{}", ids.join(" ")).expect("write to String");
    }
    out
}

fn publish(out: &Path, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(out)?;
    let staging = tempfile::Builder::new().prefix(".daf-staging").tempdir_in(out)?;
    for (name, body) in files {
        fs::write(staging.path().join(name), body)?;
    }
    for (name, _) in files {
        fs::rename(staging.path().join(name), out.join(name))?;
    }
    Ok(())
}

/// Executes a run. Nothing is written unless every step succeeds.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }
    let data = load_dataset(config)?;
    if data.probes.dim() != data.galleries.dim() {
        return Err(Error::Shape {
            context: "probe/gallery feature dimension",
            expected: data.galleries.dim(),
            found: data.probes.dim(),
        });
    }
    config
        .params
        .validate(data.galleries.dim(), data.galleries.count())?;

    let baseline = initial_ranking(&data.probes, &data.galleries)?;
    let reranked = rerank(&data.probes, &data.galleries, &config.params)?;

    let mut files = vec![
        (RANKINGS_FILE, format_rankings(&reranked, config.topk)),
        (CONFIG_FILE, serde_json::to_string_pretty(config)? + "\n"),
    ];
    let (base_metrics, daf_metrics) = match &data.truth {
        Some((probe_truth, gallery_truth)) => {
            let b = compute_metrics(&baseline, probe_truth, gallery_truth)?;
            let d = compute_metrics(&reranked, probe_truth, gallery_truth)?;
            let doc = MetricsDocument {
                evaluable_probes: d.evaluable(),
                baseline: (&b).into(),
                daf: (&d).into(),
            };
            files.push((METRICS_FILE, serde_json::to_string_pretty(&doc)? + "\n"));
            (Some(b), Some(d))
        }
        None => (None, None),
    };
    publish(&config.out, &files)?;
    Ok(RunSummary {
        baseline: base_metrics,
        daf: daf_metrics,
        out: config.out.clone(),
    })
}
