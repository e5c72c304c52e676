//! Synthetic navigation-affordance dataset toolkit.
//!
//! The library generates procedural kitchen scenes, renders depth/instance
//! views of them, labels base placements by geometric feasibility trials,
//! densifies the sparse labels onto floor point clouds by Gaussian-weighted
//! k-nearest-neighbor interpolation, stores everything in a bit-exact on-disk
//! layout, and evaluates predictions with regression metrics and
//! manipulation-success-rate probes.
//!
//! Modules follow the data flow:
//!
//! - [`geom`]: rigid transforms, pinhole camera, box rendering, point clouds.
//! - [`footprint`]: 2D collision queries used by feasibility checks.
//! - [`scenegen`]: seeded procedural scenes and object configurations.
//! - [`labeler`]: robots, viewpoints, base-placement grids, feasibility.
//! - [`affordance`]: sparse-label association and dense interpolation.
//! - [`datastore`]: binary array format, episode layout, manifests, splits.
//! - [`eval`]: regression metrics, weighted MSE, success-rate evaluation.
//! - [`pipeline`]: end-to-end orchestration used by the CLI.

pub mod affordance;
pub mod datastore;
pub mod error;
pub mod eval;
pub mod footprint;
pub mod geom;
pub mod labeler;
pub mod pipeline;
pub mod scenegen;
pub mod seed;

pub use error::{Error, Result};
