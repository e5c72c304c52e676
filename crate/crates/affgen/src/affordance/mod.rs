//! Sparse-to-dense affordance processing.
//!
//! Feasibility trials yield a handful of labeled base positions per target
//! ([`crate::labeler::SparseAffordance`]). This module turns them into
//! per-point supervision for a floor cloud two ways:
//!
//! * [`associate`] — hard assignment: a floor point inherits the value of its
//!   nearest labeled sample when that sample lies strictly within `theta`
//!   meters, and 0 otherwise. Both point sets are moved into the camera frame
//!   first; because the transform is rigid the result equals the same rule
//!   evaluated in world coordinates.
//! * [`interpolate`] — smooth assignment: each floor point receives a
//!   Gaussian-weighted average of its `k` nearest samples' values, producing
//!   a dense map in `[0, 1]`.
//!
//! Both are defined by their brute-force rules over all sample/point pairs
//! and implemented with a kd-tree; distance ties resolve to the lower sample
//! index in either formulation.

mod kdtree;

pub use kdtree::KdTree3;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{PointCloud, RigidTransform};
use crate::labeler::SparseAffordance;

/// Default neighbor count for [`interpolate`].
pub const DEFAULT_K: usize = 8;
/// Default Gaussian bandwidth in meters for [`interpolate`].
pub const DEFAULT_SIGMA: f64 = 0.10;
/// Default association radius in meters for [`associate`].
pub const DEFAULT_THETA: f64 = 0.05;

/// Parameters of the sparse-to-dense stage, recorded alongside its output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpParams {
    /// Number of nearest labeled samples blended per floor point.
    pub k: usize,
    /// Gaussian bandwidth in meters.
    pub sigma: f64,
    /// Hard-association radius in meters.
    pub theta: f64,
}

impl Default for InterpParams {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            sigma: DEFAULT_SIGMA,
            theta: DEFAULT_THETA,
        }
    }
}

impl InterpParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::param("k", "must be at least 1"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::param("sigma", "must be a positive finite number"));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::param("theta", "must be a positive finite number"));
        }
        Ok(())
    }
}

/// A dense per-point affordance map over a floor cloud.
///
/// `values[i]` belongs to point `i` of the cloud the map was computed from
/// and always lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseAffordanceMap {
    pub values: Vec<f64>,
    pub params: InterpParams,
}

/// The Gaussian kernel `exp(-d^2 / (2 sigma^2))`.
///
/// `sigma` must be positive and finite.
pub fn gaussian_weight(d: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", "must be a positive finite number"));
    }
    Ok((-(d * d) / (2.0 * sigma * sigma)).exp())
}

/// Sample positions lifted onto the floor plane as 3D points.
fn sample_points(sparse: &SparseAffordance) -> Vec<Vector3<f64>> {
    sparse
        .samples
        .iter()
        .map(|s| Vector3::new(s.position[0], s.position[1], 0.0))
        .collect()
}

/// Hard nearest-sample association in the camera frame.
///
/// Every floor point and every labeled sample is transformed by the inverse
/// of `cam_pose` (camera-to-world), then each point takes the value of its
/// nearest sample when the distance is strictly below `theta`, and 0.0
/// otherwise. Ties go to the lower sample index. An empty sample set yields
/// all zeros.
pub fn associate(
    sparse: &SparseAffordance,
    floor: &PointCloud,
    cam_pose: &RigidTransform,
    theta: f64,
) -> Result<Vec<f64>> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::param("theta", "must be a positive finite number"));
    }
    if sparse.samples.is_empty() {
        return Ok(vec![0.0; floor.len()]);
    }
    let world_to_cam = cam_pose.inverse();
    let tree = KdTree3::new(
        sample_points(sparse)
            .iter()
            .map(|p| world_to_cam.transform_point(p))
            .collect(),
    );
    Ok(floor
        .points()
        .iter()
        .map(|p| {
            let q = world_to_cam.transform_point(p);
            match tree.nearest_within(&q, theta) {
                Some((_, idx)) => sparse.samples[idx].value,
                None => 0.0,
            }
        })
        .collect())
}

/// Gaussian k-nearest-neighbor interpolation of trial labels onto a floor
/// cloud.
///
/// For floor point `p`, the `k` nearest labeled samples (3D distance to the
/// sample's floor-plane position, ties to the lower index) are blended as
/// `sum(w_j v_j) / sum(w_j)` with `w_j = exp(-d_j^2 / (2 sigma^2))`. Weights
/// are rescaled by the nearest neighbor's weight before summing, which leaves
/// the ratio unchanged but keeps the denominator at least 1, so far-away
/// points degrade toward their single nearest sample instead of losing
/// precision. Fewer than `k` samples means all are used; no samples yields an
/// all-zero map.
pub fn interpolate(
    sparse: &SparseAffordance,
    floor: &PointCloud,
    params: InterpParams,
) -> Result<DenseAffordanceMap> {
    params.validate()?;
    if sparse.samples.is_empty() {
        return Ok(DenseAffordanceMap {
            values: vec![0.0; floor.len()],
            params,
        });
    }
    let tree = KdTree3::new(sample_points(sparse));
    let inv_two_sigma_sq = 1.0 / (2.0 * params.sigma * params.sigma);
    let values = floor
        .points()
        .iter()
        .map(|p| {
            let neighbors = tree.k_nearest(p, params.k);
            let d2_min = neighbors[0].0;
            let mut num = 0.0;
            let mut den = 0.0;
            for &(d2, idx) in &neighbors {
                let w = (-(d2 - d2_min) * inv_two_sigma_sq).exp();
                num += w * sparse.samples[idx].value;
                den += w;
            }
            let v = num / den;
            debug_assert!((0.0..=1.0).contains(&v));
            v
        })
        .collect();
    Ok(DenseAffordanceMap { values, params })
}
