//! Turning configurations into labeled data: camera viewpoints with
//! visibility resampling, the base-placement grid, and the geometric
//! feasibility oracle that assigns each grid cell a binary outcome.

mod feasibility;
mod grid;
mod robot;
mod viewpoints;

pub use feasibility::{feasible, label_configuration, Sample, SparseAffordance};
pub use grid::{sample_base_grid, DEFAULT_GRID_SPACING};
pub use robot::{EndEffector, RobotSpec};
pub use viewpoints::{sample_viewpoints, CAMERA_HEIGHT, FORWARD_RANGE, LATERAL_RANGE};
