use nalgebra::{Vector2, Vector3};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geom::{first_hit, RigidTransform};
use crate::scenegen::Configuration;
use crate::seed::{self, salt};

/// Camera height above the floor, meters.
pub const CAMERA_HEIGHT: f64 = 1.2;
/// Forward distance range from the target along its frontal direction.
pub const FORWARD_RANGE: (f64, f64) = (1.5, 3.8);
/// Lateral offset range to either side of the frontal axis.
pub const LATERAL_RANGE: (f64, f64) = (0.0, 1.5);
/// Redraws per slot before the slot is dropped as not visible.
const VISIBILITY_RETRIES: usize = 25;

/// Draws up to `k` camera poses around a target.
///
/// Each slot alternates sides (even slots left of the frontal axis, odd
/// slots right) and draws a forward distance uniform in [1.5, 3.8] m and a
/// lateral offset uniform in [0.0, 1.5] m, at a fixed 1.2 m eye height,
/// looking at the target's focus point. A draw is accepted when the ray from
/// the eye to the focus point first hits the target's instance — otherwise
/// the slot redraws up to 25 times and is then dropped, so fewer than `k`
/// poses may come back. Deterministic in `(config, target_id, seed, k)`.
pub fn sample_viewpoints(
    config: &Configuration,
    target_id: u32,
    seed: u64,
    k: usize,
) -> Result<Vec<RigidTransform>> {
    let target = config
        .target(target_id)
        .ok_or(Error::UnknownId(target_id))?;
    let solids = config.solids();
    let focus = target.focus_point();
    let anchor = target.floor_xy();
    let frontal = -target.approach_v();
    let tangent = Vector2::new(-frontal.y, frontal.x);
    let mut rng = seed::rng(seed, salt::VIEWS, u64::from(target_id), 0);

    let mut poses = Vec::with_capacity(k);
    for slot in 0..k {
        let side = if slot % 2 == 0 { 1.0 } else { -1.0 };
        for _attempt in 0..=VISIBILITY_RETRIES {
            let forward = rng.random_range(FORWARD_RANGE.0..FORWARD_RANGE.1);
            let lateral = rng.random_range(LATERAL_RANGE.0..LATERAL_RANGE.1);
            let eye_xy = anchor + frontal * forward + tangent * (side * lateral);
            let eye = Vector3::new(eye_xy.x, eye_xy.y, CAMERA_HEIGHT);
            let visible = first_hit(&solids, &eye, &(focus - eye))
                .is_some_and(|(_, id)| id == target_id);
            if visible {
                poses.push(RigidTransform::look_at(eye, focus, Vector3::z()));
                break;
            }
        }
    }
    Ok(poses)
}
