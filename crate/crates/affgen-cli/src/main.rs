//! Command-line driver for the affordance dataset toolkit.
//!
//! Every command prints a single JSON document on standard out; progress and
//! diagnostics go to standard error as `key=value` lines. Exit codes: 0 on
//! success, 2 for usage errors, 3 for data/format errors, 4 for I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use affgen::affordance::{InterpParams, DEFAULT_K, DEFAULT_SIGMA, DEFAULT_THETA};
use affgen::labeler::DEFAULT_GRID_SPACING;
use affgen::pipeline::{
    evaluate_datasets, generate, interpolate_dataset, label_dataset, msr_datasets,
    stats_dataset, PipelineConfig, DEFAULT_TRAIN_FRACTION, DEFAULT_Z_MAX,
};
use affgen::Error;

#[derive(Parser)]
#[command(
    name = "affgen",
    version,
    about = "Synthetic navigation-affordance datasets: generation, labeling, interpolation, and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InterpFlags {
    /// Neighbors blended per floor point.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Gaussian kernel bandwidth in meters.
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Association radius in meters.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
}

impl InterpFlags {
    fn params(&self) -> InterpParams {
        InterpParams {
            k: self.k,
            sigma: self.sigma,
            theta: self.theta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset: scenes, configurations, rendered episodes,
    /// trial labels, dense maps, and the split manifest.
    Generate {
        /// Run seed; equal seeds give byte-identical trees.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of scenes.
        #[arg(long, default_value_t = 2)]
        scenes: usize,
        /// Object configurations per scene.
        #[arg(long, default_value_t = 5)]
        configs_per_scene: usize,
        /// Camera viewpoints requested per configuration.
        #[arg(long, default_value_t = 5)]
        views: usize,
        /// Robot whose reachability defines the labels.
        #[arg(long, default_value = "panda")]
        robot: String,
        #[command(flatten)]
        interp: InterpFlags,
        /// Trial grid spacing in meters.
        #[arg(long, default_value_t = DEFAULT_GRID_SPACING)]
        spacing: f64,
        /// Height cutoff for floor extraction in meters.
        #[arg(long = "zmax", default_value_t = DEFAULT_Z_MAX)]
        z_max: f64,
        /// Down-weight applied to a random half of the zero-valued
        /// ground-truth entries during weighted evaluation.
        #[arg(long, default_value_t = affgen::eval::DEFAULT_LAMBDA)]
        lambda: f64,
        /// Fraction of scenes assigned to the training split.
        #[arg(long, default_value_t = DEFAULT_TRAIN_FRACTION)]
        train_fraction: f64,
        /// Output dataset root.
        #[arg(long, default_value = "dataset")]
        out: PathBuf,
        /// Worker count; 0 means one per available core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Relabel every episode of a dataset for a robot (sparse labels only;
    /// run `interpolate` afterwards to refresh the dense maps).
    Label {
        /// Dataset root.
        #[arg(long, default_value = "dataset")]
        out: PathBuf,
        /// Robot whose reachability defines the labels.
        #[arg(long, default_value = "panda")]
        robot: String,
        /// Trial grid spacing in meters.
        #[arg(long, default_value_t = DEFAULT_GRID_SPACING)]
        spacing: f64,
    },
    /// Recompute every episode's dense map from its stored sparse labels.
    Interpolate {
        /// Dataset root.
        #[arg(long, default_value = "dataset")]
        out: PathBuf,
        #[command(flatten)]
        interp: InterpFlags,
    },
    /// Compare the dense maps of two aligned dataset trees.
    Eval {
        /// Root of the tree holding predicted dense maps.
        pred_dir: PathBuf,
        /// Root of the reference tree; its manifest drives the walk.
        gt_dir: PathBuf,
    },
    /// Score a prediction tree's dense maps with the feasibility oracle.
    Msr {
        /// Root of the tree holding predicted dense maps.
        pred_dir: PathBuf,
        /// Root of the reference dataset.
        dataset: PathBuf,
        /// Ranked placements re-checked per episode.
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Print disk-verified split statistics for a dataset.
    Stats {
        /// Dataset root.
        dataset: PathBuf,
    },
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let v = serde_json::to_value(value).expect("reports serialize infallibly");
    println!("{}", serde_json::to_string_pretty(&v).expect("value prints"));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate {
            seed,
            scenes,
            configs_per_scene,
            views,
            robot,
            interp,
            spacing,
            z_max,
            lambda,
            train_fraction,
            out,
            jobs,
        } => {
            let cfg = PipelineConfig {
                seed,
                scenes,
                configs_per_scene,
                views,
                robot,
                k: interp.k,
                sigma: interp.sigma,
                theta: interp.theta,
                spacing,
                z_max,
                lambda,
                train_fraction,
                out,
                jobs,
            };
            let manifest = generate(&cfg)?;
            emit(&serde_json::json!({ "manifest": manifest }))
        }
        Command::Label { out, robot, spacing } => {
            let episodes = label_dataset(&out, &robot, spacing)?;
            emit(&serde_json::json!({ "episodes": episodes, "robot": robot }))
        }
        Command::Interpolate { out, interp } => {
            let episodes = interpolate_dataset(&out, interp.params())?;
            emit(&serde_json::json!({ "episodes": episodes }))
        }
        Command::Eval { pred_dir, gt_dir } => {
            emit(&evaluate_datasets(&pred_dir, &gt_dir)?)
        }
        Command::Msr { pred_dir, dataset, top } => {
            emit(&msr_datasets(&pred_dir, &dataset, top)?)
        }
        Command::Stats { dataset } => emit(&stats_dataset(&dataset)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error={err} code={}", err.exit_code());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
