//! Bit-exact on-disk dataset layout.
//!
//! A dataset root looks like:
//!
//! ```text
//! <root>/manifest.json
//! <root>/scene_<id>/scene.json
//! <root>/scene_<id>/config_<id>/config.json
//! <root>/scene_<id>/config_<id>/episode_<id>/depth.bin
//!                                            ids.bin
//!                                            cloud.bin
//!                                            floor.bin
//!                                            sparse.bin
//!                                            dense.bin
//!                                            meta.json
//! ```
//!
//! Every `.bin` file uses the array container documented in [`array`]
//! (magic `MMKA`, little-endian header, packed payload). JSON files are
//! written with sorted keys and shortest round-trip float formatting, so the
//! whole tree is byte-stable: the same seed and parameters always produce an
//! identical tree.
//!
//! Cloud rows are `x, y, z` followed by the channels in
//! [`CHANNEL_ID`]/[`CHANNEL_TARGET`]/[`CHANNEL_OBSTACLE`] order. `sparse.bin`
//! rows are `x, y, value`; `dense.bin` is one value per floor-cloud point.

pub mod array;
mod episode;
mod manifest;

pub use array::{ArrayData, ArrayFile, ARRAY_MAGIC, ARRAY_VERSION, MAX_DIMS};
pub use episode::{
    attach_feature_channels, read_episode, write_episode, Episode, EpisodeMeta, CHANNEL_ID,
    CHANNEL_OBSTACLE, CHANNEL_TARGET, CLOUD_FILE, DENSE_FILE, DEPTH_FILE, FLOOR_FILE, IDS_FILE,
    META_FILE, SPARSE_FILE,
};
pub use manifest::{
    split_dataset, stats, ConfigEntry, DatasetManifest, DatasetStats, SceneEntry, Split,
    SplitCounts, MANIFEST_VERSION,
};

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SCENE_FILE: &str = "scene.json";
pub const CONFIG_FILE: &str = "config.json";

pub fn scene_dir(root: &Path, scene_id: u64) -> PathBuf {
    root.join(format!("scene_{scene_id}"))
}

pub fn config_dir(root: &Path, scene_id: u64, config_id: u64) -> PathBuf {
    scene_dir(root, scene_id).join(format!("config_{config_id}"))
}

pub fn episode_dir(root: &Path, scene_id: u64, config_id: u64, episode_id: u64) -> PathBuf {
    config_dir(root, scene_id, config_id).join(format!("episode_{episode_id}"))
}

/// Writes `value` as pretty JSON with sorted keys and a trailing newline.
pub fn write_json_sorted<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    // Round-tripping through `Value` sorts all object keys.
    let value = serde_json::to_value(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads a JSON file written by [`write_json_sorted`] (or any valid JSON).
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
