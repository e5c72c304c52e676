//! One rendered view and its supervision, serialized to an episode directory.

use std::fs;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::affordance::{DenseAffordanceMap, InterpParams};
use crate::error::{Error, Result};
use crate::geom::{CameraIntrinsics, DepthMap, IdMap, PointCloud, RigidTransform, NO_HIT};
use crate::labeler::{RobotSpec, Sample, SparseAffordance};

use super::array::ArrayFile;
use super::{read_json, write_json_sorted};

/// Cloud channel holding the per-point instance id (as a float).
pub const CHANNEL_ID: usize = 0;
/// Cloud channel holding 1 on the manipulation target, 0 elsewhere.
pub const CHANNEL_TARGET: usize = 1;
/// Cloud channel holding -1 on obstacles, 0 elsewhere.
pub const CHANNEL_OBSTACLE: usize = 2;

pub const DEPTH_FILE: &str = "depth.bin";
pub const IDS_FILE: &str = "ids.bin";
pub const CLOUD_FILE: &str = "cloud.bin";
pub const FLOOR_FILE: &str = "floor.bin";
pub const SPARSE_FILE: &str = "sparse.bin";
pub const DENSE_FILE: &str = "dense.bin";
pub const META_FILE: &str = "meta.json";

/// Everything one camera view produces: rendered maps, derived clouds, and
/// the sparse plus dense affordance supervision.
#[derive(Debug, Clone)]
pub struct Episode {
    pub episode_id: u64,
    pub config_id: u64,
    pub camera_pose: RigidTransform,
    pub intrinsics: CameraIntrinsics,
    pub depth: DepthMap,
    pub ids: IdMap,
    pub global_cloud: PointCloud,
    pub floor_cloud: PointCloud,
    pub robot: RobotSpec,
    pub sparse: SparseAffordance,
    pub dense: DenseAffordanceMap,
}

/// Marks target and obstacle points in a cloud that carries a bare
/// instance-id channel.
///
/// Appends two channels: [`CHANNEL_TARGET`] holds 1 where the id equals
/// `target_id` (0 elsewhere) and [`CHANNEL_OBSTACLE`] holds -1 where the id
/// is one of `obstacle_ids` (0 elsewhere). The input must have exactly the
/// id channel so the new channels land at their documented indices.
pub fn attach_feature_channels(
    cloud: PointCloud,
    target_id: u32,
    obstacle_ids: &[u32],
) -> Result<PointCloud> {
    if cloud.channel_count() != CHANNEL_ID + 1 {
        return Err(Error::DimensionMismatch(format!(
            "feature channels need a cloud with exactly the instance-id channel, got {} channels",
            cloud.channel_count()
        )));
    }
    let ids = cloud.channel(CHANNEL_ID);
    let target: Vec<f64> = ids
        .iter()
        .map(|&v| if v == f64::from(target_id) { 1.0 } else { 0.0 })
        .collect();
    let obstacle: Vec<f64> = ids
        .iter()
        .map(|&v| {
            if obstacle_ids.iter().any(|&o| v == f64::from(o)) {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    let mut cloud = cloud;
    cloud.push_channel(target)?;
    cloud.push_channel(obstacle)?;
    Ok(cloud)
}

/// The JSON side of an episode; arrays live in the sibling `.bin` files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpisodeMeta {
    pub episode_id: u64,
    pub config_id: u64,
    pub camera_pose: RigidTransform,
    pub intrinsics: CameraIntrinsics,
    pub robot: RobotSpec,
    pub target_id: u32,
    pub interp: InterpParams,
}

fn ensure_finite(name: &str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    for (i, v) in values.into_iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::param(
                "episode",
                format!("{name} holds a non-finite value {v} at index {i}"),
            ));
        }
    }
    Ok(())
}

fn validate(e: &Episode) -> Result<()> {
    if e.dense.values.len() != e.floor_cloud.len() {
        return Err(Error::DimensionMismatch(format!(
            "dense map has {} values but the floor cloud has {} points",
            e.dense.values.len(),
            e.floor_cloud.len()
        )));
    }
    if (e.depth.width, e.depth.height) != (e.ids.width, e.ids.height)
        || (e.depth.width, e.depth.height) != (e.intrinsics.width, e.intrinsics.height)
    {
        return Err(Error::DimensionMismatch(format!(
            "depth {}x{}, ids {}x{} and intrinsics {}x{} disagree",
            e.depth.width,
            e.depth.height,
            e.ids.width,
            e.ids.height,
            e.intrinsics.width,
            e.intrinsics.height
        )));
    }
    // The only non-finite float allowed on disk is the exact no-hit sentinel.
    for (i, v) in e.depth.values.iter().enumerate() {
        if !v.is_finite() && v.to_bits() != NO_HIT.to_bits() {
            return Err(Error::param(
                "episode",
                format!("depth holds a non-sentinel non-finite value at index {i}"),
            ));
        }
    }
    for (name, cloud) in [("global cloud", &e.global_cloud), ("floor cloud", &e.floor_cloud)] {
        ensure_finite(name, cloud.points().iter().flat_map(|p| [p.x, p.y, p.z]))?;
        for c in 0..cloud.channel_count() {
            ensure_finite(name, cloud.channel(c).iter().copied())?;
        }
    }
    ensure_finite(
        "sparse samples",
        e.sparse
            .samples
            .iter()
            .flat_map(|s| [s.position[0], s.position[1], s.value]),
    )?;
    ensure_finite("dense map", e.dense.values.iter().copied())?;
    Ok(())
}

fn cloud_to_array(cloud: &PointCloud) -> Result<ArrayFile> {
    let width = 3 + cloud.channel_count();
    let mut values = Vec::with_capacity(cloud.len() * width);
    for (i, p) in cloud.points().iter().enumerate() {
        values.extend([p.x as f32, p.y as f32, p.z as f32]);
        for c in 0..cloud.channel_count() {
            values.push(cloud.channel(c)[i] as f32);
        }
    }
    ArrayFile::f32(vec![cloud.len() as u64, width as u64], values)
}

fn cloud_from_array(arr: &ArrayFile, file: &Path) -> Result<PointCloud> {
    let bad = |what: String| Error::DimensionMismatch(format!("{}: {what}", file.display()));
    if arr.dims.len() != 2 {
        return Err(bad(format!("expected a 2-d cloud array, got {:?}", arr.dims)));
    }
    let n = arr.dims[0] as usize;
    let width = arr.dims[1] as usize;
    if width < 3 {
        return Err(bad(format!("cloud rows need at least x, y, z; width is {width}")));
    }
    let values = arr.expect_f32()?;
    let mut points = Vec::with_capacity(n);
    let mut channels = vec![Vec::with_capacity(n); width - 3];
    for row in values.chunks_exact(width) {
        points.push(Vector3::new(
            f64::from(row[0]),
            f64::from(row[1]),
            f64::from(row[2]),
        ));
        for (c, channel) in channels.iter_mut().enumerate() {
            channel.push(f64::from(row[3 + c]));
        }
    }
    PointCloud::with_channels(points, channels)
}

/// Writes all episode files into `dir`, creating it if needed.
///
/// Clouds, sparse samples and the dense map are stored at single precision;
/// depth values keep their exact bits, including the no-hit sentinel.
pub fn write_episode(e: &Episode, dir: &Path) -> Result<()> {
    validate(e)?;
    fs::create_dir_all(dir).map_err(|err| Error::io(dir, err))?;
    let depth = ArrayFile::f32(
        vec![u64::from(e.depth.height), u64::from(e.depth.width)],
        e.depth.values.clone(),
    )?;
    depth.write(&dir.join(DEPTH_FILE))?;
    let ids = ArrayFile::u32(
        vec![u64::from(e.ids.height), u64::from(e.ids.width)],
        e.ids.values.clone(),
    )?;
    ids.write(&dir.join(IDS_FILE))?;
    cloud_to_array(&e.global_cloud)?.write(&dir.join(CLOUD_FILE))?;
    cloud_to_array(&e.floor_cloud)?.write(&dir.join(FLOOR_FILE))?;
    let sparse_values: Vec<f32> = e
        .sparse
        .samples
        .iter()
        .flat_map(|s| [s.position[0] as f32, s.position[1] as f32, s.value as f32])
        .collect();
    ArrayFile::f32(vec![e.sparse.samples.len() as u64, 3], sparse_values)?
        .write(&dir.join(SPARSE_FILE))?;
    let dense_values: Vec<f32> = e.dense.values.iter().map(|&v| v as f32).collect();
    ArrayFile::f32(vec![dense_values.len() as u64], dense_values)?
        .write(&dir.join(DENSE_FILE))?;
    let meta = EpisodeMeta {
        episode_id: e.episode_id,
        config_id: e.config_id,
        camera_pose: e.camera_pose.clone(),
        intrinsics: e.intrinsics,
        robot: e.robot.clone(),
        target_id: e.sparse.target_id,
        interp: e.dense.params,
    };
    write_json_sorted(&dir.join(META_FILE), &meta)
}

/// Reads an episode directory written by [`write_episode`].
///
/// Writing the result back produces byte-identical files.
pub fn read_episode(dir: &Path) -> Result<Episode> {
    let meta: EpisodeMeta = read_json(&dir.join(META_FILE))?;
    let mismatch = |file: &Path, what: String| {
        Error::DimensionMismatch(format!("{}: {what}", file.display()))
    };

    let depth_path = dir.join(DEPTH_FILE);
    let depth_arr = ArrayFile::read(&depth_path)?;
    if depth_arr.dims
        != [u64::from(meta.intrinsics.height), u64::from(meta.intrinsics.width)]
    {
        return Err(mismatch(
            &depth_path,
            format!(
                "depth shape {:?} does not match the {}x{} intrinsics",
                depth_arr.dims, meta.intrinsics.width, meta.intrinsics.height
            ),
        ));
    }
    let depth = DepthMap {
        width: meta.intrinsics.width,
        height: meta.intrinsics.height,
        values: depth_arr.expect_f32()?.to_vec(),
    };

    let ids_path = dir.join(IDS_FILE);
    let ids_arr = ArrayFile::read(&ids_path)?;
    if ids_arr.dims != depth_arr.dims {
        return Err(mismatch(
            &ids_path,
            format!(
                "id shape {:?} does not match the depth shape {:?}",
                ids_arr.dims, depth_arr.dims
            ),
        ));
    }
    let ids = IdMap {
        width: meta.intrinsics.width,
        height: meta.intrinsics.height,
        values: ids_arr.expect_u32()?.to_vec(),
    };

    let cloud_path = dir.join(CLOUD_FILE);
    let global_cloud = cloud_from_array(&ArrayFile::read(&cloud_path)?, &cloud_path)?;
    let floor_path = dir.join(FLOOR_FILE);
    let floor_cloud = cloud_from_array(&ArrayFile::read(&floor_path)?, &floor_path)?;

    let sparse_path = dir.join(SPARSE_FILE);
    let sparse_arr = ArrayFile::read(&sparse_path)?;
    if sparse_arr.dims.len() != 2 || sparse_arr.dims[1] != 3 {
        return Err(mismatch(
            &sparse_path,
            format!("expected an m x 3 sample array, got {:?}", sparse_arr.dims),
        ));
    }
    let samples = sparse_arr
        .expect_f32()?
        .chunks_exact(3)
        .map(|row| Sample {
            position: [f64::from(row[0]), f64::from(row[1])],
            value: f64::from(row[2]),
        })
        .collect();
    let sparse = SparseAffordance {
        samples,
        robot: meta.robot.clone(),
        target_id: meta.target_id,
    };

    let dense_path = dir.join(DENSE_FILE);
    let dense_arr = ArrayFile::read(&dense_path)?;
    if dense_arr.dims.len() != 1 {
        return Err(mismatch(
            &dense_path,
            format!("expected a 1-d value array, got {:?}", dense_arr.dims),
        ));
    }
    if dense_arr.dims[0] != floor_cloud.len() as u64 {
        return Err(mismatch(
            &dense_path,
            format!(
                "dense map has {} values but the floor cloud has {} points",
                dense_arr.dims[0],
                floor_cloud.len()
            ),
        ));
    }
    let dense = DenseAffordanceMap {
        values: dense_arr.expect_f32()?.iter().map(|&v| f64::from(v)).collect(),
        params: meta.interp,
    };

    Ok(Episode {
        episode_id: meta.episode_id,
        config_id: meta.config_id,
        camera_pose: meta.camera_pose,
        intrinsics: meta.intrinsics,
        depth,
        ids,
        global_cloud,
        floor_cloud,
        robot: meta.robot,
        sparse,
        dense,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{self, salt};
    use rand::Rng;

    fn sample_cloud(rng: &mut impl Rng, n: usize, with_features: bool) -> PointCloud {
        let points: Vec<Vector3<f64>> = (0..n)
            .map(|_| {
                Vector3::new(
                    rng.random_range(-3.0..3.0),
                    rng.random_range(-3.0..3.0),
                    rng.random_range(0.0..2.0),
                )
            })
            .collect();
        let ids: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0u32..6))).collect();
        let cloud = PointCloud::with_channels(points, vec![ids]).unwrap();
        if with_features {
            attach_feature_channels(cloud, 3, &[4, 5]).unwrap()
        } else {
            cloud
        }
    }

    fn sample_episode(seed: u64) -> Episode {
        let mut rng = seed::rng(seed, salt::SCENE, 7, 7);
        let intrinsics = CameraIntrinsics::try_new(8, 6, 6.0, 6.0, 4.0, 3.0).unwrap();
        let n_px = 48;
        let depth = DepthMap {
            width: 8,
            height: 6,
            values: (0..n_px)
                .map(|i| if i % 5 == 0 { NO_HIT } else { rng.random_range(0.5..4.0) })
                .collect(),
        };
        let ids = IdMap {
            width: 8,
            height: 6,
            values: (0..n_px).map(|_| rng.random_range(0..6)).collect(),
        };
        let global_cloud = sample_cloud(&mut rng, 40, true);
        let floor_cloud = sample_cloud(&mut rng, 25, true);
        let samples = (0..12)
            .map(|_| Sample {
                position: [rng.random_range(0.0..4.0), rng.random_range(0.0..2.0)],
                value: if rng.random_range(0.0..1.0) < 0.5 { 1.0 } else { 0.0 },
            })
            .collect();
        let robot = RobotSpec::default_catalog()[1].clone();
        Episode {
            episode_id: 11,
            config_id: 4,
            camera_pose: RigidTransform::from_z_rotation(
                0.3,
                Vector3::new(1.0, 2.0, 1.2),
            ),
            intrinsics,
            depth,
            ids,
            global_cloud,
            floor_cloud,
            robot: robot.clone(),
            sparse: SparseAffordance {
                samples,
                robot,
                target_id: 3,
            },
            dense: DenseAffordanceMap {
                values: (0..25).map(|_| rng.random_range(0.0..1.0)).collect(),
                params: InterpParams::default(),
            },
        }
    }

    #[test]
    fn feature_channels_mark_target_and_obstacles() {
        // A cloud of only target-surface points.
        let pts = vec![Vector3::new(0.0, 0.0, 1.0); 4];
        let target_only =
            PointCloud::with_channels(pts.clone(), vec![vec![7.0; 4]]).unwrap();
        let got = attach_feature_channels(target_only, 7, &[2, 3]).unwrap();
        assert_eq!(got.channel(CHANNEL_TARGET), &[1.0; 4]);
        assert_eq!(got.channel(CHANNEL_OBSTACLE), &[0.0; 4]);

        // A cloud of only floor points (id 0).
        let floor_only = PointCloud::with_channels(pts.clone(), vec![vec![0.0; 4]]).unwrap();
        let got = attach_feature_channels(floor_only, 7, &[2, 3]).unwrap();
        assert_eq!(got.channel(CHANNEL_TARGET), &[0.0; 4]);
        assert_eq!(got.channel(CHANNEL_OBSTACLE), &[0.0; 4]);

        // Mixed ids match a per-point brute-force lookup.
        let ids = vec![0.0, 7.0, 2.0, 3.0, 5.0, 7.0];
        let mixed = PointCloud::with_channels(
            vec![Vector3::zeros(); 6],
            vec![ids.clone()],
        )
        .unwrap();
        let got = attach_feature_channels(mixed, 7, &[2, 3]).unwrap();
        for (i, id) in ids.iter().enumerate() {
            let expect_target = if *id == 7.0 { 1.0 } else { 0.0 };
            let expect_obstacle = if *id == 2.0 || *id == 3.0 { -1.0 } else { 0.0 };
            assert_eq!(got.channel(CHANNEL_TARGET)[i], expect_target);
            assert_eq!(got.channel(CHANNEL_OBSTACLE)[i], expect_obstacle);
        }
    }

    #[test]
    fn feature_channels_require_a_bare_id_channel() {
        let no_ids = PointCloud::new(vec![Vector3::zeros()]);
        assert!(attach_feature_channels(no_ids, 1, &[]).is_err());
        let two = PointCloud::with_channels(
            vec![Vector3::zeros()],
            vec![vec![0.0], vec![0.0]],
        )
        .unwrap();
        assert!(attach_feature_channels(two, 1, &[]).is_err());
    }

    #[test]
    fn write_read_write_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("a");
        let second = dir.path().join("b");
        let episode = sample_episode(60);
        write_episode(&episode, &first).unwrap();
        let back = read_episode(&first).unwrap();
        write_episode(&back, &second).unwrap();
        for name in [
            DEPTH_FILE,
            IDS_FILE,
            CLOUD_FILE,
            FLOOR_FILE,
            SPARSE_FILE,
            DENSE_FILE,
            META_FILE,
        ] {
            let a = fs::read(first.join(name)).unwrap();
            let b = fs::read(second.join(name)).unwrap();
            assert_eq!(a, b, "{name} changed across a read/write cycle");
        }
    }

    #[test]
    fn read_restores_the_written_fields() {
        let dir = tempfile::tempdir().unwrap();
        let episode = sample_episode(61);
        write_episode(&episode, dir.path()).unwrap();
        let back = read_episode(dir.path()).unwrap();
        assert_eq!(back.episode_id, episode.episode_id);
        assert_eq!(back.config_id, episode.config_id);
        assert_eq!(back.intrinsics, episode.intrinsics);
        assert_eq!(back.robot, episode.robot);
        assert_eq!(back.sparse.target_id, episode.sparse.target_id);
        assert_eq!(back.dense.params, episode.dense.params);
        // Camera pose round-trips exactly (JSON floats use shortest
        // round-trip formatting).
        assert_eq!(back.camera_pose.rotation(), episode.camera_pose.rotation());
        assert_eq!(back.camera_pose.translation(), episode.camera_pose.translation());
        // Depth round-trips at the bit level, including sentinels.
        let a: Vec<u32> = back.depth.values.iter().map(|v| v.to_bits()).collect();
        let b: Vec<u32> = episode.depth.values.iter().map(|v| v.to_bits()).collect();
        assert_eq!(a, b);
        assert_eq!(back.ids, episode.ids);
        // Clouds and affordances come back at single precision.
        for (got, want) in back
            .global_cloud
            .points()
            .iter()
            .zip(episode.global_cloud.points())
        {
            for c in 0..3 {
                assert_eq!(got[c], f64::from(want[c] as f32));
            }
        }
        assert_eq!(back.global_cloud.channel_count(), 3);
        for (got, want) in back.dense.values.iter().zip(&episode.dense.values) {
            assert_eq!(*got, f64::from(*want as f32));
        }
        for (got, want) in back.sparse.samples.iter().zip(&episode.sparse.samples) {
            assert_eq!(got.value, want.value, "binary labels are exact in f32");
        }
    }

    #[test]
    fn corrupt_files_produce_structured_errors() {
        let dir = tempfile::tempdir().unwrap();
        write_episode(&sample_episode(62), dir.path()).unwrap();

        // Magic flip in one array names that file and offset 0.
        let cloud_path = dir.path().join(CLOUD_FILE);
        let mut bytes = fs::read(&cloud_path).unwrap();
        bytes[1] = b'Z';
        fs::write(&cloud_path, &bytes).unwrap();
        match read_episode(dir.path()).unwrap_err() {
            Error::Format { path, offset, .. } => {
                assert_eq!(path, cloud_path);
                assert_eq!(offset, 0);
            }
            other => panic!("expected a format error, got {other:?}"),
        }
        bytes[1] = b'M';
        fs::write(&cloud_path, &bytes).unwrap();

        // Unknown version in the header.
        let depth_path = dir.path().join(DEPTH_FILE);
        let mut bytes = fs::read(&depth_path).unwrap();
        let keep = bytes.clone();
        bytes[4..8].copy_from_slice(&9u32.to_le_bytes());
        fs::write(&depth_path, &bytes).unwrap();
        match read_episode(dir.path()).unwrap_err() {
            Error::Format { path, offset, what } => {
                assert_eq!(path, depth_path);
                assert_eq!(offset, 4);
                assert!(what.contains("version 9"));
            }
            other => panic!("expected a format error, got {other:?}"),
        }
        fs::write(&depth_path, &keep).unwrap();

        // Truncated affordance payload.
        let dense_path = dir.path().join(DENSE_FILE);
        let bytes = fs::read(&dense_path).unwrap();
        fs::write(&dense_path, &bytes[..bytes.len() - 4]).unwrap();
        match read_episode(dir.path()).unwrap_err() {
            Error::Format { path, what, .. } => {
                assert_eq!(path, dense_path);
                assert!(what.contains("length mismatch"), "{what}");
            }
            other => panic!("expected a format error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_episodes_are_rejected_before_writing() {
        let dir = tempfile::tempdir().unwrap();
        let mut episode = sample_episode(63);
        episode.dense.values.pop();
        assert!(matches!(
            write_episode(&episode, dir.path()),
            Err(Error::DimensionMismatch(_))
        ));

        let mut episode = sample_episode(63);
        episode.dense.values[0] = f64::NAN;
        assert!(matches!(
            write_episode(&episode, dir.path()),
            Err(Error::Param { .. })
        ));

        // A NaN that is not the exact sentinel is rejected; the sentinel is
        // accepted (sample episodes already carry it).
        let mut episode = sample_episode(63);
        episode.depth.values[3] = f32::from_bits(0x7FC0_0001);
        assert!(matches!(
            write_episode(&episode, dir.path()),
            Err(Error::Param { .. })
        ));
    }

    #[test]
    fn dense_floor_length_mismatch_is_caught_on_read() {
        let dir = tempfile::tempdir().unwrap();
        write_episode(&sample_episode(64), dir.path()).unwrap();
        let dense_path = dir.path().join(DENSE_FILE);
        // Rewrite dense.bin with one value too few (valid as an array file).
        ArrayFile::f32(vec![24], vec![0.5; 24])
            .unwrap()
            .write(&dense_path)
            .unwrap();
        match read_episode(dir.path()).unwrap_err() {
            Error::DimensionMismatch(msg) => {
                assert!(msg.contains("dense"), "{msg}");
                assert!(msg.contains("floor"), "{msg}");
            }
            other => panic!("expected a dimension error, got {other:?}"),
        }
    }
}
