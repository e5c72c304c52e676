use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labeler::{sample_base_grid, RobotSpec};
use crate::scenegen::Configuration;

/// One labeled base placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Floor position of the base center, meters.
    pub position: [f64; 2],
    /// Trial outcome: 1.0 feasible, 0.0 not.
    pub value: f64,
}

/// Binary feasibility outcomes over the base-placement grid of one
/// (configuration, target, robot) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseAffordance {
    pub samples: Vec<Sample>,
    pub robot: RobotSpec,
    pub target_id: u32,
}

/// The geometric stand-in for a manipulation trial. A base placement is
/// feasible iff all three hold:
///
/// (a) the base disc of `base_radius` overlaps no obstacle or furniture
///     footprint;
/// (b) the 3D distance from the shoulder point `(base, base_height)` to the
///     target position lies in the closed band `[min_reach, arm_reach]`;
/// (c) the floor corridor from the base to the target's floor projection,
///     inflated by the end-effector's approach half-width, touches no
///     obstacle footprint (furniture is fine: the arm works above it).
pub fn feasible(
    robot: &RobotSpec,
    base: Vector2<f64>,
    config: &Configuration,
    target_id: u32,
) -> Result<bool> {
    let target = config
        .target(target_id)
        .ok_or(Error::UnknownId(target_id))?;
    let obstacle_rects = config.obstacle_rects();

    // (a) base collision.
    for rect in obstacle_rects.iter().chain(config.furniture_rects().iter()) {
        if rect.overlaps_circle(base, robot.base_radius) {
            return Ok(false);
        }
    }

    // (b) reach band.
    let shoulder = Vector3::new(base.x, base.y, robot.base_height);
    let dist = (target.position_v() - shoulder).norm();
    if !(robot.min_reach..=robot.arm_reach).contains(&dist) {
        return Ok(false);
    }

    // (c) approach corridor.
    let half_width = robot.approach_half_width();
    let goal = target.floor_xy();
    for rect in &obstacle_rects {
        if rect.distance_to_segment(base, goal) <= half_width {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs [`feasible`] over every [`sample_base_grid`] point of the target, in
/// grid order. Bit-deterministic.
pub fn label_configuration(
    robot: &RobotSpec,
    config: &Configuration,
    target_id: u32,
    spacing: f64,
) -> Result<SparseAffordance> {
    let target = config
        .target(target_id)
        .ok_or(Error::UnknownId(target_id))?;
    let grid = sample_base_grid(
        target.floor_xy(),
        target.approach_v(),
        robot.arm_reach,
        spacing,
    );
    let mut samples = Vec::with_capacity(grid.len());
    for p in grid {
        let ok = feasible(robot, p, config, target_id)?;
        samples.push(Sample {
            position: [p.x, p.y],
            value: if ok { 1.0 } else { 0.0 },
        });
    }
    Ok(SparseAffordance {
        samples,
        robot: robot.clone(),
        target_id,
    })
}
