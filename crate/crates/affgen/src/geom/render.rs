use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geom::{CameraIntrinsics, RigidTransform};

/// Sentinel for pixels whose ray hits nothing. Non-finite in memory; the
/// on-disk encoding is the exact bit pattern `0xFFFF_FFFF`.
pub const NO_HIT: f32 = f32::from_bits(0xFFFF_FFFF);

/// Instance id recorded for pixels with no hit (same id as the floor:
/// 0 = background).
pub const BACKGROUND_ID: u32 = 0;

/// Minimum ray parameter accepted as a hit, guarding against self-hits at
/// the camera origin.
const T_MIN: f64 = 1e-9;

/// An axis-aligned box with an instance id — the only solid primitive in the
/// scene model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solid {
    pub id: u32,
    pub min: Vector3<f64>,
    pub max: Vector3<f64>,
}

impl Solid {
    /// Box standing on `z0` with the given footprint center, footprint
    /// half-extents and height.
    pub fn from_footprint(
        id: u32,
        center_xy: [f64; 2],
        half_extents_xy: [f64; 2],
        z0: f64,
        height: f64,
    ) -> Self {
        Self {
            id,
            min: Vector3::new(center_xy[0] - half_extents_xy[0], center_xy[1] - half_extents_xy[1], z0),
            max: Vector3::new(
                center_xy[0] + half_extents_xy[0],
                center_xy[1] + half_extents_xy[1],
                z0 + height,
            ),
        }
    }
}

/// Per-pixel camera-frame z-depth in meters, row-major. Misses hold the
/// non-finite [`NO_HIT`] sentinel; all other values are positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    pub width: u32,
    pub height: u32,
    pub values: Vec<f32>,
}

/// Per-pixel instance id, row-major; 0 is background/floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    pub width: u32,
    pub height: u32,
    pub values: Vec<u32>,
}

impl DepthMap {
    pub fn at(&self, u: u32, v: u32) -> f32 {
        self.values[(v * self.width + u) as usize]
    }

    /// Number of pixels that hit geometry.
    pub fn finite_count(&self) -> usize {
        self.values.iter().filter(|d| d.is_finite()).count()
    }
}

impl IdMap {
    pub fn at(&self, u: u32, v: u32) -> u32 {
        self.values[(v * self.width + u) as usize]
    }
}

/// First intersection of the ray `origin + t * dir` with an axis-aligned box,
/// by the slab method. Returns the smallest `t > T_MIN`; if the origin is
/// inside the box that is the exit face.
fn ray_box(origin: &Vector3<f64>, dir: &Vector3<f64>, solid: &Solid) -> Option<f64> {
    let mut t_enter = f64::NEG_INFINITY;
    let mut t_exit = f64::INFINITY;
    for axis in 0..3 {
        let o = origin[axis];
        let d = dir[axis];
        if d.abs() < 1e-15 {
            if o < solid.min[axis] || o > solid.max[axis] {
                return None;
            }
        } else {
            let inv = 1.0 / d;
            let mut ta = (solid.min[axis] - o) * inv;
            let mut tb = (solid.max[axis] - o) * inv;
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t_enter = t_enter.max(ta);
            t_exit = t_exit.min(tb);
            if t_enter > t_exit {
                return None;
            }
        }
    }
    if t_enter > T_MIN {
        Some(t_enter)
    } else if t_exit > T_MIN {
        Some(t_exit)
    } else {
        None
    }
}

/// Intersection with the floor plane z = 0, if in front of the origin.
fn ray_floor(origin: &Vector3<f64>, dir: &Vector3<f64>) -> Option<f64> {
    if dir.z.abs() < 1e-15 {
        return None;
    }
    let t = -origin.z / dir.z;
    (t > T_MIN).then_some(t)
}

/// Nearest hit of one ray against the floor plane and the given boxes:
/// `(ray parameter, instance id)`, or `None` if the ray escapes. Ties between
/// coincident surfaces go to the floor first, then to the earlier box.
pub fn first_hit(
    solids: &[Solid],
    origin: &Vector3<f64>,
    dir: &Vector3<f64>,
) -> Option<(f64, u32)> {
    let mut best_t = f64::INFINITY;
    let mut best_id = BACKGROUND_ID;
    if let Some(t) = ray_floor(origin, dir) {
        best_t = t;
    }
    for solid in solids {
        if let Some(t) = ray_box(origin, dir, solid) {
            if t < best_t {
                best_t = t;
                best_id = solid.id;
            }
        }
    }
    best_t.is_finite().then_some((best_t, best_id))
}

/// Ray-casts every pixel against the floor plane and the given boxes.
///
/// `pose` is the camera-to-world transform. Each pixel's ray goes through the
/// pixel center with an unnormalized camera-frame direction of z = 1, so the
/// ray parameter of the nearest hit *is* the camera z-depth. Pixels that hit
/// nothing get [`NO_HIT`] depth and id 0. Ties between coincident surfaces go
/// to the floor first, then to the earlier box in `solids`.
pub fn render_depth(
    solids: &[Solid],
    pose: &RigidTransform,
    intr: &CameraIntrinsics,
) -> Result<(DepthMap, IdMap)> {
    // Intrinsics may come from deserialized files, so re-check the fields the
    // ray math divides by.
    if !(intr.fx.is_finite() && intr.fx != 0.0 && intr.fy.is_finite() && intr.fy != 0.0) {
        return Err(Error::param(
            "intrinsics",
            format!("degenerate focal lengths fx={} fy={}", intr.fx, intr.fy),
        ));
    }
    let n = intr.width as usize * intr.height as usize;
    let mut depth = vec![NO_HIT; n];
    let mut ids = vec![BACKGROUND_ID; n];
    let origin = *pose.translation();
    for v in 0..intr.height {
        for u in 0..intr.width {
            let dir = pose.transform_vector(&intr.pixel_ray(u, v));
            if let Some((t, id)) = first_hit(solids, &origin, &dir) {
                let i = (v * intr.width + u) as usize;
                depth[i] = t as f32;
                ids[i] = id;
            }
        }
    }
    Ok((
        DepthMap {
            width: intr.width,
            height: intr.height,
            values: depth,
        },
        IdMap {
            width: intr.width,
            height: intr.height,
            values: ids,
        },
    ))
}
