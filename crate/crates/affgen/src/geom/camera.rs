use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pinhole camera intrinsics.
///
/// Pixel `(u, v)` indexes column `u` (rightward) and row `v` (downward); the
/// ray for a pixel passes through its center at `(u + 0.5, v + 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub width: u32,
    pub height: u32,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraIntrinsics {
    /// Validated constructor: dimensions and focal lengths must be positive
    /// and finite, and the principal point finite.
    pub fn try_new(width: u32, height: u32, fx: f64, fy: f64, cx: f64, cy: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("width/height", "image dimensions must be nonzero"));
        }
        for (name, v) in [("fx", fx), ("fy", fy)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("focal length must be finite and positive, got {v}")));
            }
        }
        for (name, v, limit) in [("cx", cx, f64::from(width)), ("cy", cy, f64::from(height))] {
            if !v.is_finite() || v < 0.0 || v >= limit {
                return Err(Error::param(
                    name,
                    format!("principal point must lie inside the image, got {v} for size {limit}"),
                ));
            }
        }
        Ok(Self {
            width,
            height,
            fx,
            fy,
            cx,
            cy,
        })
    }

    /// The default sensor used throughout the pipeline: 160x120 at
    /// fx = fy = 120 with the principal point at the image center.
    pub fn default_sensor() -> Self {
        Self {
            width: 160,
            height: 120,
            fx: 120.0,
            fy: 120.0,
            cx: 80.0,
            cy: 60.0,
        }
    }

    /// Camera-frame ray direction through the center of pixel `(u, v)`.
    ///
    /// The direction is left unnormalized with z = 1, so the ray parameter
    /// along it equals camera z-depth.
    pub fn pixel_ray(&self, u: u32, v: u32) -> Vector3<f64> {
        Vector3::new(
            (f64::from(u) + 0.5 - self.cx) / self.fx,
            (f64::from(v) + 0.5 - self.cy) / self.fy,
            1.0,
        )
    }

    /// Projects a camera-frame point to continuous pixel coordinates.
    ///
    /// Returns `None` for points at or behind the camera plane (z <= 0).
    pub fn project(&self, p_cam: &Vector3<f64>) -> Option<(f64, f64)> {
        if p_cam.z <= 0.0 {
            return None;
        }
        Some((
            self.fx * p_cam.x / p_cam.z + self.cx,
            self.fy * p_cam.y / p_cam.z + self.cy,
        ))
    }

    /// Lifts pixel `(u, v)` at depth `z` back to a camera-frame point.
    pub fn unproject(&self, u: u32, v: u32, z: f64) -> Vector3<f64> {
        self.pixel_ray(u, v) * z
    }
}
