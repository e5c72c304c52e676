//! Dataset-level bookkeeping: the manifest, scene-level splits, and
//! disk-verified statistics.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{self, salt};

use super::{config_dir, episode_dir, read_json, scene_dir, write_json_sorted, MANIFEST_FILE};

/// Current manifest schema version.
pub const MANIFEST_VERSION: u32 = 1;

/// Which partition a scene (and everything under it) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEntry {
    pub config_id: u64,
    pub episodes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneEntry {
    pub scene_id: u64,
    pub split: Split,
    pub configs: Vec<ConfigEntry>,
}

/// Index of a dataset tree: every scene, configuration and episode id, plus
/// the scene-level split assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub seed: u64,
    pub scenes: Vec<SceneEntry>,
}

impl DatasetManifest {
    pub fn new(seed: u64, scenes: Vec<SceneEntry>) -> Self {
        Self {
            version: MANIFEST_VERSION,
            seed,
            scenes,
        }
    }

    pub fn save(&self, root: &Path) -> Result<()> {
        write_json_sorted(&root.join(MANIFEST_FILE), self)
    }

    pub fn load(root: &Path) -> Result<Self> {
        let path = root.join(MANIFEST_FILE);
        let manifest: Self = read_json(&path)?;
        if manifest.version != MANIFEST_VERSION {
            return Err(Error::Format {
                path,
                offset: 0,
                what: format!(
                    "unsupported manifest version {}, expected {MANIFEST_VERSION}",
                    manifest.version
                ),
            });
        }
        Ok(manifest)
    }
}

/// Reassigns scene splits by a seeded shuffle.
///
/// Scenes are shuffled deterministically, the first `round(train_fraction *
/// n)` of the shuffle (clamped so neither side is empty) become the training
/// set, and every configuration and episode inherits its scene's side, so no
/// scene ever straddles the partition. Scene order in the returned manifest
/// is unchanged; only the labels move.
pub fn split_dataset(
    manifest: &DatasetManifest,
    train_fraction: f64,
    seed: u64,
) -> Result<DatasetManifest> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::param(
            "train_fraction",
            "must lie strictly between 0 and 1",
        ));
    }
    let n = manifest.scenes.len();
    if n < 2 {
        return Err(Error::param(
            "manifest",
            format!("splitting needs at least 2 scenes, got {n}"),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seed::rng(seed, salt::SPLIT, 0, 0);
    order.shuffle(&mut rng);
    let n_train = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let train: BTreeSet<usize> = order[..n_train].iter().copied().collect();
    let mut out = manifest.clone();
    for (i, scene) in out.scenes.iter_mut().enumerate() {
        scene.split = if train.contains(&i) {
            Split::Train
        } else {
            Split::Test
        };
    }
    Ok(out)
}

/// Scene, configuration and episode counts for one side of the split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SplitCounts {
    pub scenes: usize,
    pub configurations: usize,
    pub episodes: usize,
}

impl SplitCounts {
    fn add_scene(&mut self, scene: &SceneEntry) {
        self.scenes += 1;
        self.configurations += scene.configs.len();
        self.episodes += scene.configs.iter().map(|c| c.episodes.len()).sum::<usize>();
    }
}

/// Per-split dataset statistics, verified against the directory tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub train: SplitCounts,
    pub test: SplitCounts,
}

impl DatasetStats {
    pub fn total(&self) -> SplitCounts {
        SplitCounts {
            scenes: self.train.scenes + self.test.scenes,
            configurations: self.train.configurations + self.test.configurations,
            episodes: self.train.episodes + self.test.episodes,
        }
    }
}

/// Subdirectories of `dir` named `<prefix>_<number>`, as sorted ids.
fn numbered_dirs(dir: &Path, prefix: &str) -> Result<Vec<u64>> {
    let mut ids = Vec::new();
    if !dir.is_dir() {
        return Ok(ids);
    }
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if !entry.path().is_dir() {
            continue;
        }
        let name = entry.file_name();
        let Some(rest) = name.to_string_lossy().strip_prefix(prefix).map(str::to_owned) else {
            continue;
        };
        if let Ok(id) = rest.parse::<u64>() {
            ids.push(id);
        }
    }
    ids.sort_unstable();
    Ok(ids)
}

/// Counts scenes, configurations and episodes per split and cross-checks the
/// manifest against the directory tree in both directions.
///
/// Any episode, configuration or scene present in only one of the two is a
/// discrepancy; all of them are collected into a single error.
pub fn stats(manifest: &DatasetManifest, root: &Path) -> Result<DatasetStats> {
    let mut train = SplitCounts::default();
    let mut test = SplitCounts::default();
    for scene in &manifest.scenes {
        match scene.split {
            Split::Train => train.add_scene(scene),
            Split::Test => test.add_scene(scene),
        }
    }

    let mut problems: Vec<String> = Vec::new();
    let mut missing = |path: &Path| {
        problems.push(format!("in manifest but missing on disk: {}", path.display()));
    };
    // Manifest -> disk.
    for scene in &manifest.scenes {
        let sdir = scene_dir(root, scene.scene_id);
        if !sdir.is_dir() {
            missing(&sdir);
            continue;
        }
        for config in &scene.configs {
            let cdir = config_dir(root, scene.scene_id, config.config_id);
            if !cdir.is_dir() {
                missing(&cdir);
                continue;
            }
            for &episode in &config.episodes {
                let edir = episode_dir(root, scene.scene_id, config.config_id, episode);
                if !edir.is_dir() {
                    missing(&edir);
                }
            }
        }
    }
    // Disk -> manifest.
    let mut stray = |path: &Path| {
        problems.push(format!("on disk but not in manifest: {}", path.display()));
    };
    for scene_id in numbered_dirs(root, "scene_")? {
        let Some(scene) = manifest.scenes.iter().find(|s| s.scene_id == scene_id) else {
            stray(&scene_dir(root, scene_id));
            continue;
        };
        let sdir = scene_dir(root, scene_id);
        for config_id in numbered_dirs(&sdir, "config_")? {
            let Some(config) = scene.configs.iter().find(|c| c.config_id == config_id) else {
                stray(&config_dir(root, scene_id, config_id));
                continue;
            };
            let cdir = config_dir(root, scene_id, config_id);
            for episode_id in numbered_dirs(&cdir, "episode_")? {
                if !config.episodes.contains(&episode_id) {
                    stray(&episode_dir(root, scene_id, config_id, episode_id));
                }
            }
        }
    }
    if !problems.is_empty() {
        problems.sort();
        return Err(Error::Discrepancy(problems));
    }
    Ok(DatasetStats { train, test })
}
