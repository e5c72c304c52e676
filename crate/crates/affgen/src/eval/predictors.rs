//! Reference predictors: a seeded random baseline and a geometry-only
//! heuristic. Both emit dense maps shaped like the interpolated ground truth
//! so they drop straight into the metric and success-rate machinery.

use nalgebra::{Vector2, Vector3};
use rand::Rng;

use crate::affordance::{DenseAffordanceMap, InterpParams};
use crate::datastore::Episode;
use crate::error::{Error, Result};
use crate::geom::PointCloud;
use crate::labeler::{RobotSpec, DEFAULT_GRID_SPACING};
use crate::scenegen::Configuration;
use crate::seed::{self, salt};

/// The operational half-disc membership test used for the random baseline:
/// within arm reach of the target's floor anchor and on the robot's side.
fn inside_semicircle(
    p: Vector2<f64>,
    target_xy: Vector2<f64>,
    approach: Vector2<f64>,
    arm_reach: f64,
) -> bool {
    let d = p - target_xy;
    let r2 = arm_reach * arm_reach * (1.0 + 16.0 * f64::EPSILON);
    d.norm_squared() <= r2 && d.dot(&approach) < 0.0
}

/// Uniform random scores inside the robot's operational semicircle, zero
/// outside.
///
/// One value in `[0, 1)` is drawn per inside point, in floor-point index
/// order, from a generator derived from `seed`.
pub fn predict_random(
    floor: &PointCloud,
    robot: &crate::labeler::RobotSpec,
    config: &Configuration,
    target_id: u32,
    seed: u64,
) -> Result<DenseAffordanceMap> {
    let target = config.target(target_id).ok_or(Error::UnknownId(target_id))?;
    let target_xy = target.floor_xy();
    let approach = target.approach_v();
    let mut rng = seed::rng(seed, salt::RANDOM_PRED, 0, 0);
    let values = floor
        .points()
        .iter()
        .map(|p| {
            if inside_semicircle(Vector2::new(p.x, p.y), target_xy, approach, robot.arm_reach) {
                rng.random::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    Ok(DenseAffordanceMap {
        values,
        params: InterpParams::default(),
    })
}

/// A training-free geometric score: `reach_band * clearance` per floor
/// point.
///
/// `reach_band` is 1 where the shoulder-to-target distance lies inside the
/// robot's `[min_reach, arm_reach]` annulus and tapers linearly to 0 over
/// one grid spacing outside it. `clearance` is the distance to the nearest
/// footprint the base could collide with — obstacles and furniture alike —
/// clamped at `base_radius` and normalized to `[0, 1]` (so points inside a
/// footprint score 0). The product stays in `[0, 1]`.
pub fn predict_heuristic(episode: &Episode, config: &Configuration) -> Result<DenseAffordanceMap> {
    heuristic_scores(
        &episode.floor_cloud,
        &episode.robot,
        config,
        episode.sparse.target_id,
    )
}

/// [`predict_heuristic`] over an arbitrary floor support, for callers that
/// score configurations without a rendered episode.
pub fn heuristic_scores(
    floor: &PointCloud,
    robot: &RobotSpec,
    config: &Configuration,
    target_id: u32,
) -> Result<DenseAffordanceMap> {
    let target = config.target(target_id).ok_or(Error::UnknownId(target_id))?;
    let target_pos = target.position_v();
    let mut rects = config.obstacle_rects();
    rects.extend(config.furniture_rects());
    let values = floor
        .points()
        .iter()
        .map(|p| {
            let shoulder = Vector3::new(p.x, p.y, robot.base_height);
            let d = (target_pos - shoulder).norm();
            let band = if d < robot.min_reach {
                (1.0 - (robot.min_reach - d) / DEFAULT_GRID_SPACING).max(0.0)
            } else if d <= robot.arm_reach {
                1.0
            } else {
                (1.0 - (d - robot.arm_reach) / DEFAULT_GRID_SPACING).max(0.0)
            };
            let nearest = rects
                .iter()
                .map(|r| r.distance_to_point(Vector2::new(p.x, p.y)))
                .fold(robot.base_radius, f64::min);
            band * (nearest / robot.base_radius)
        })
        .collect();
    Ok(DenseAffordanceMap {
        values,
        params: InterpParams::default(),
    })
}
