use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geom::{CameraIntrinsics, DepthMap, IdMap, RigidTransform};

/// World-frame points with optional per-point scalar channels.
///
/// Channels are stored column-major (`channels[c][i]` is channel `c` of point
/// `i`); every channel has exactly one value per point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Vector3<f64>>,
    channels: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vector3<f64>>) -> Self {
        Self {
            points,
            channels: Vec::new(),
        }
    }

    /// Builds a cloud with channels, rejecting ragged channel lengths.
    pub fn with_channels(points: Vec<Vector3<f64>>, channels: Vec<Vec<f64>>) -> Result<Self> {
        for (c, ch) in channels.iter().enumerate() {
            if ch.len() != points.len() {
                return Err(Error::DimensionMismatch(format!(
                    "channel {c} has {} values for {} points",
                    ch.len(),
                    points.len()
                )));
            }
        }
        Ok(Self { points, channels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        &self.points
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.channels[c]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    /// Appends one channel; its length must match the point count.
    pub fn push_channel(&mut self, values: Vec<f64>) -> Result<()> {
        if values.len() != self.points.len() {
            return Err(Error::DimensionMismatch(format!(
                "channel has {} values for {} points",
                values.len(),
                self.points.len()
            )));
        }
        self.channels.push(values);
        Ok(())
    }

    pub fn into_parts(self) -> (Vec<Vector3<f64>>, Vec<Vec<f64>>) {
        (self.points, self.channels)
    }
}

/// Lifts every finite-depth pixel to a world-frame point, carrying the
/// instance id along as the cloud's first channel.
///
/// Pixel math runs in f64; depths are widened from their stored f32. The
/// output order is row-major pixel order restricted to finite pixels.
pub fn backproject(
    depth: &DepthMap,
    ids: &IdMap,
    intr: &CameraIntrinsics,
    pose: &RigidTransform,
) -> Result<PointCloud> {
    if depth.width != ids.width || depth.height != ids.height {
        return Err(Error::DimensionMismatch(format!(
            "depth {}x{} vs ids {}x{}",
            depth.width, depth.height, ids.width, ids.height
        )));
    }
    if depth.width != intr.width || depth.height != intr.height {
        return Err(Error::DimensionMismatch(format!(
            "depth {}x{} vs intrinsics {}x{}",
            depth.width, depth.height, intr.width, intr.height
        )));
    }
    let expect = depth.width as usize * depth.height as usize;
    if depth.values.len() != expect || ids.values.len() != expect {
        return Err(Error::DimensionMismatch(format!(
            "map buffers hold {} / {} values, dimensions imply {expect}",
            depth.values.len(),
            ids.values.len()
        )));
    }
    let mut points = Vec::new();
    let mut id_channel = Vec::new();
    for v in 0..depth.height {
        for u in 0..depth.width {
            let z = depth.at(u, v);
            if !z.is_finite() {
                continue;
            }
            let p_cam = intr.unproject(u, v, f64::from(z));
            points.push(pose.transform_point(&p_cam));
            id_channel.push(f64::from(ids.at(u, v)));
        }
    }
    PointCloud::with_channels(points, vec![id_channel])
}

/// Keeps exactly the points with z strictly below `z_max`, preserving order
/// and all channels. `z_max` must be positive (default 0.02 m).
pub fn extract_floor(cloud: &PointCloud, z_max: f64) -> PointCloud {
    debug_assert!(z_max > 0.0, "z_max must be positive");
    let keep: Vec<usize> = (0..cloud.len())
        .filter(|&i| cloud.points()[i].z < z_max)
        .collect();
    let points = keep.iter().map(|&i| cloud.points()[i]).collect();
    let channels = cloud
        .channels()
        .iter()
        .map(|ch| keep.iter().map(|&i| ch[i]).collect())
        .collect();
    PointCloud::with_channels(points, channels).expect("filtered channels stay aligned")
}
