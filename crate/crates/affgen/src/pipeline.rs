//! End-to-end orchestration: scene generation through episode writing, plus
//! the dataset-level label/interpolate/evaluate/success-rate passes.
//!
//! Per-unit seeds are derived from the run seed with the module salts, so a
//! run is reproducible as a whole and every scene, configuration and view is
//! independent of how work is scheduled. Scene directories are written by
//! independent workers; the manifest is finalized single-threaded at the
//! end.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affordance::{interpolate, InterpParams, DEFAULT_K, DEFAULT_SIGMA, DEFAULT_THETA};
use crate::datastore::{
    attach_feature_channels, config_dir, episode_dir, read_episode, read_json, scene_dir,
    split_dataset, stats, write_episode, write_json_sorted, ConfigEntry, DatasetManifest,
    DatasetStats, Episode, SceneEntry, Split, CONFIG_FILE, MANIFEST_FILE, SCENE_FILE,
};
use crate::error::{Error, Result};
use crate::eval::{
    aggregate_metrics, aggregate_msr, metric_values, msr, MetricsReport, MsrReport,
    DEFAULT_LAMBDA,
};
use crate::geom::{backproject, extract_floor, render_depth, CameraIntrinsics};
use crate::labeler::{
    label_configuration, sample_viewpoints, RobotSpec, SparseAffordance, DEFAULT_GRID_SPACING,
};
use crate::scenegen::{generate_configurations, generate_scene, AssetCatalog, Configuration};
use crate::seed::{self, salt};

/// Default height cutoff for floor extraction, meters.
pub const DEFAULT_Z_MAX: f64 = 0.02;
/// Default fraction of scenes assigned to the training split.
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.8;

/// Every knob of a generation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed: u64,
    pub scenes: usize,
    pub configs_per_scene: usize,
    pub views: usize,
    pub robot: String,
    pub k: usize,
    pub sigma: f64,
    pub theta: f64,
    pub spacing: f64,
    pub z_max: f64,
    pub lambda: f64,
    pub train_fraction: f64,
    pub out: PathBuf,
    /// Worker count; 0 means one per available core.
    pub jobs: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            scenes: 2,
            configs_per_scene: 5,
            views: 5,
            robot: "panda".into(),
            k: DEFAULT_K,
            sigma: DEFAULT_SIGMA,
            theta: DEFAULT_THETA,
            spacing: DEFAULT_GRID_SPACING,
            z_max: DEFAULT_Z_MAX,
            lambda: DEFAULT_LAMBDA,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            out: PathBuf::from("dataset"),
            jobs: 0,
        }
    }
}

impl PipelineConfig {
    pub fn interp(&self) -> InterpParams {
        InterpParams {
            k: self.k,
            sigma: self.sigma,
            theta: self.theta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenes == 0 {
            return Err(Error::param("scenes", "must generate at least one scene"));
        }
        if self.configs_per_scene == 0 {
            return Err(Error::param("configs_per_scene", "must be at least 1"));
        }
        if self.views == 0 {
            return Err(Error::param("views", "must be at least 1"));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::param("spacing", "must be a positive finite number"));
        }
        if !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(Error::param("z_max", "must be a positive finite number"));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::param("lambda", "must lie strictly between 0 and 1"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::param(
                "train_fraction",
                "must lie strictly between 0 and 1",
            ));
        }
        self.interp().validate()
    }
}

fn resolve_robot(catalog: &[RobotSpec], name: &str) -> Result<RobotSpec> {
    RobotSpec::by_name(catalog, name)
        .cloned()
        .ok_or_else(|| {
            let known: Vec<&str> = catalog.iter().map(|r| r.name.as_str()).collect();
            Error::param("robot", format!("unknown robot {name:?}, known: {known:?}"))
        })
}

/// Renders one view of a configuration and assembles the full episode.
fn build_episode(
    config: &Configuration,
    sparse: &SparseAffordance,
    robot: &RobotSpec,
    pose: &crate::geom::RigidTransform,
    intrinsics: &CameraIntrinsics,
    episode_id: u64,
    params: InterpParams,
    z_max: f64,
) -> Result<Episode> {
    let (depth, ids) = render_depth(&config.solids(), pose, intrinsics)?;
    let cloud = backproject(&depth, &ids, intrinsics, pose)?;
    let obstacle_ids: Vec<u32> = config.obstacles.iter().map(|o| o.id).collect();
    let global_cloud = attach_feature_channels(cloud, config.primary_target, &obstacle_ids)?;
    let floor_cloud = extract_floor(&global_cloud, z_max);
    let dense = interpolate(sparse, &floor_cloud, params)?;
    Ok(Episode {
        episode_id,
        config_id: config.config_id,
        camera_pose: pose.clone(),
        intrinsics: *intrinsics,
        depth,
        ids,
        global_cloud,
        floor_cloud,
        robot: robot.clone(),
        sparse: sparse.clone(),
        dense,
    })
}

/// Generates one scene directory and returns its manifest entry.
fn build_scene(
    cfg: &PipelineConfig,
    catalog: &AssetCatalog,
    robot: &RobotSpec,
    si: u64,
) -> Result<SceneEntry> {
    let scene_seed = seed::derive(cfg.seed, salt::SCENE, si, 0);
    let mut scene = generate_scene(scene_seed, catalog)?;
    scene.scene_id = si;
    let sdir = scene_dir(&cfg.out, si);
    std::fs::create_dir_all(&sdir).map_err(|e| Error::io(&sdir, e))?;
    write_json_sorted(&sdir.join(SCENE_FILE), &scene)?;

    let config_seed = seed::derive(cfg.seed, salt::CONFIG, si, 0);
    let configs =
        generate_configurations(&scene, config_seed, cfg.configs_per_scene, catalog)?;
    let intrinsics = CameraIntrinsics::default_sensor();
    let params = cfg.interp();

    let mut entries = Vec::with_capacity(configs.len());
    let mut scene_episodes = 0usize;
    for config in &configs {
        let cdir = config_dir(&cfg.out, si, config.config_id);
        std::fs::create_dir_all(&cdir).map_err(|e| Error::io(&cdir, e))?;
        write_json_sorted(&cdir.join(CONFIG_FILE), config)?;

        let sparse =
            label_configuration(robot, config, config.primary_target, cfg.spacing)?;
        let view_seed = seed::derive(cfg.seed, salt::VIEWS, si, config.config_id);
        let poses = sample_viewpoints(config, config.primary_target, view_seed, cfg.views)?;
        if poses.len() < cfg.views {
            eprintln!(
                "event=view_drop scene={si} config={} kept={} requested={}",
                config.config_id,
                poses.len(),
                cfg.views
            );
        }
        let mut episode_ids = Vec::with_capacity(poses.len());
        for (ei, pose) in poses.iter().enumerate() {
            let episode_id = ei as u64;
            let episode = build_episode(
                config, &sparse, robot, pose, &intrinsics, episode_id, params, cfg.z_max,
            )?;
            write_episode(
                &episode,
                &episode_dir(&cfg.out, si, config.config_id, episode_id),
            )?;
            episode_ids.push(episode_id);
        }
        scene_episodes += episode_ids.len();
        entries.push(ConfigEntry {
            config_id: config.config_id,
            episodes: episode_ids,
        });
    }
    eprintln!(
        "event=scene_complete scene={si} configs={} episodes={scene_episodes}",
        entries.len()
    );
    Ok(SceneEntry {
        scene_id: si,
        split: Split::Train,
        configs: entries,
    })
}

/// Runs the full generation pipeline and returns the manifest path.
///
/// Scenes are generated in parallel (up to `jobs` workers), each writing only
/// its own directory; the split is assigned and the manifest written once at
/// the end. Datasets with a single scene are left entirely in the training
/// split.
pub fn generate(cfg: &PipelineConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let catalog = AssetCatalog::default_kitchen();
    let robot = resolve_robot(&RobotSpec::default_catalog(), &cfg.robot)?;
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::param("jobs", e.to_string()))?;
    let entries: Result<Vec<SceneEntry>> = pool.install(|| {
        (0..cfg.scenes as u64)
            .into_par_iter()
            .map(|si| build_scene(cfg, &catalog, &robot, si))
            .collect()
    });
    let manifest = DatasetManifest::new(cfg.seed, entries?);
    let manifest = if manifest.scenes.len() >= 2 {
        split_dataset(&manifest, cfg.train_fraction, cfg.seed)?
    } else {
        manifest
    };
    manifest.save(&cfg.out)?;
    Ok(cfg.out.join(MANIFEST_FILE))
}

fn for_each_episode_dir(
    manifest: &DatasetManifest,
    root: &Path,
    mut f: impl FnMut(PathBuf) -> Result<()>,
) -> Result<usize> {
    let mut count = 0;
    for scene in &manifest.scenes {
        for config in &scene.configs {
            for &episode in &config.episodes {
                f(episode_dir(root, scene.scene_id, config.config_id, episode))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Relabels every episode of a dataset for `robot_name`: sparse trial labels
/// and the episode's robot record are replaced; dense maps are left to a
/// following [`interpolate_dataset`] pass. Returns the episode count.
pub fn label_dataset(root: &Path, robot_name: &str, spacing: f64) -> Result<usize> {
    let manifest = DatasetManifest::load(root)?;
    let robot = resolve_robot(&RobotSpec::default_catalog(), robot_name)?;
    let mut count = 0;
    for scene in &manifest.scenes {
        for entry in &scene.configs {
            let cdir = config_dir(root, scene.scene_id, entry.config_id);
            let config: Configuration = read_json(&cdir.join(CONFIG_FILE))?;
            let sparse =
                label_configuration(&robot, &config, config.primary_target, spacing)?;
            for &episode in &entry.episodes {
                let dir = episode_dir(root, scene.scene_id, entry.config_id, episode);
                let mut e = read_episode(&dir)?;
                e.robot = robot.clone();
                e.sparse = sparse.clone();
                write_episode(&e, &dir)?;
                count += 1;
            }
        }
    }
    eprintln!("event=label_complete robot={robot_name} episodes={count}");
    Ok(count)
}

/// Recomputes every episode's dense map from its stored sparse labels.
/// Returns the episode count.
pub fn interpolate_dataset(root: &Path, params: InterpParams) -> Result<usize> {
    params.validate()?;
    let manifest = DatasetManifest::load(root)?;
    let count = for_each_episode_dir(&manifest, root, |dir| {
        let mut e = read_episode(&dir)?;
        e.dense = interpolate(&e.sparse, &e.floor_cloud, params)?;
        write_episode(&e, &dir)
    })?;
    eprintln!("event=interpolate_complete episodes={count}");
    Ok(count)
}

/// Compares the dense maps of two aligned dataset trees, episode by episode.
///
/// The reference tree's manifest drives the walk; each episode must exist in
/// both trees with equally sized maps.
pub fn evaluate_datasets(pred_root: &Path, gt_root: &Path) -> Result<MetricsReport> {
    let manifest = DatasetManifest::load(gt_root)?;
    let mut items = Vec::new();
    for scene in &manifest.scenes {
        for config in &scene.configs {
            for &episode in &config.episodes {
                let gt = read_episode(&episode_dir(
                    gt_root,
                    scene.scene_id,
                    config.config_id,
                    episode,
                ))?;
                let pred = read_episode(&episode_dir(
                    pred_root,
                    scene.scene_id,
                    config.config_id,
                    episode,
                ))?;
                items.push((
                    scene.scene_id,
                    metric_values(&pred.dense.values, &gt.dense.values)?,
                ));
            }
        }
    }
    aggregate_metrics(&items)
}

/// Scores a prediction tree's dense maps with the feasibility oracle.
///
/// For every episode in the reference dataset, the prediction tree's dense
/// map ranks that episode's floor points and the top picks are re-checked
/// against the reference configuration. One episode is one trial.
pub fn msr_datasets(pred_root: &Path, gt_root: &Path, top_k: usize) -> Result<MsrReport> {
    let manifest = DatasetManifest::load(gt_root)?;
    let mut reports = Vec::new();
    for scene in &manifest.scenes {
        for entry in &scene.configs {
            let cdir = config_dir(gt_root, scene.scene_id, entry.config_id);
            let config: Configuration = read_json(&cdir.join(CONFIG_FILE))?;
            for &episode in &entry.episodes {
                let gt = read_episode(&episode_dir(
                    gt_root,
                    scene.scene_id,
                    entry.config_id,
                    episode,
                ))?;
                let pred = read_episode(&episode_dir(
                    pred_root,
                    scene.scene_id,
                    entry.config_id,
                    episode,
                ))?;
                reports.push(msr(
                    &pred.dense,
                    &gt.floor_cloud,
                    &gt.robot,
                    &config,
                    gt.sparse.target_id,
                    top_k,
                )?);
            }
        }
    }
    aggregate_msr(&reports)
}

/// Loads the manifest and returns disk-verified split statistics.
pub fn stats_dataset(root: &Path) -> Result<DatasetStats> {
    let manifest = DatasetManifest::load(root)?;
    stats(&manifest, root)
}
