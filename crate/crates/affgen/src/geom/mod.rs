//! Rigid transforms, pinhole camera model, depth rendering against box
//! primitives, back-projection and floor extraction.
//!
//! World frame: z up, floor plane at z = 0. Camera frame: x right, y down,
//! z forward; depth values are camera-frame z ("z-depth"), not Euclidean
//! ray length.

mod camera;
mod cloud;
mod render;
mod transform;

pub use camera::CameraIntrinsics;
pub use cloud::{backproject, extract_floor, PointCloud};
pub use render::{first_hit, render_depth, DepthMap, IdMap, Solid, BACKGROUND_ID, NO_HIT};
pub use transform::RigidTransform;
