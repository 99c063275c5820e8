use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use daf_rerank::{run, FeatureFormat, ReRankParams, RunConfig, SplitStrategy, SyntheticSpec};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Binary,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SplitArg {
    Contiguous,
    Random,
}

/// Divide-and-fuse re-ranking of a gallery for each probe.
#[derive(Debug, Parser)]
#[command(name = "daf", version)]
struct Cli {
    #[arg(long, value_name = "PATH")]
    probe_features: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    gallery_features: Option<PathBuf>,
    /// Labels CSV (index,person_id,camera_id), probes first then galleries.
    #[arg(long, value_name = "PATH")]
    labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "binary")]
    format: FormatArg,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Number of sub-features.
    #[arg(long = "L", default_value_t = 11)]
    num_parts: usize,
    #[arg(long, default_value_t = 20)]
    k1: usize,
    #[arg(long, default_value_t = 4)]
    k2: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    lambda: f64,
    #[arg(long, default_value_t = 2)]
    iterations: usize,
    #[arg(long, value_enum, default_value = "contiguous")]
    split: SplitArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Length of each written ranking list.
    #[arg(long, default_value_t = 100)]
    topk: usize,

    /// Use the built-in clustered generator instead of feature files.
    #[arg(long)]
    synthetic: bool,
    #[arg(long, default_value_t = 50)]
    ids: usize,
    #[arg(long, default_value_t = 6)]
    per_id: usize,
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, default_value_t = 0.6)]
    noise: f64,
    #[arg(long, default_value_t = 4)]
    cameras: usize,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        RunConfig {
            params: ReRankParams {
                num_parts: self.num_parts,
                k1: self.k1,
                k2: self.k2,
                alpha: self.alpha,
                lambda: self.lambda,
                iterations: self.iterations,
                split: match self.split {
                    SplitArg::Contiguous => SplitStrategy::Contiguous,
                    SplitArg::Random => SplitStrategy::Random,
                },
                seed: self.seed,
                ..Default::default()
            },
            probe_features: self.probe_features,
            gallery_features: self.gallery_features,
            labels: self.labels,
            format: match self.format {
                FormatArg::Binary => FeatureFormat::Binary,
                FormatArg::Csv => FeatureFormat::Csv,
            },
            out: self.out,
            topk: self.topk,
            synthetic: self.synthetic.then_some(SyntheticSpec {
                n_ids: self.ids,
                per_id: self.per_id,
                dim: self.dim,
                noise: self.noise,
                n_cameras: self.cameras,
                seed: self.seed,
            }),
        }
    }
}

fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    match run(&config) {
        Ok(summary) => {
            if let (Some(b), Some(d)) = (&summary.baseline, &summary.daf) {
                println!(
                    "baseline: rank1 {:.4} mAP {:.4}\ndaf:      rank1 {:.4} mAP {:.4}",
                    b.rank(1),
                    b.map_score,
                    d.rank(1),
                    d.map_score
                );
            }
            println!("wrote {}", summary.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
