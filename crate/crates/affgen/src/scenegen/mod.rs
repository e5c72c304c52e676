//! Seeded procedural generation: asset catalogs, single-wall kitchen scenes,
//! and target/obstacle configurations.
//!
//! Geometry conventions: the wall runs along the x axis at y = 0; furniture
//! boxes extend from the wall toward +y; the open floor (and every camera and
//! base placement) lies further out in +y. All generation is deterministic in
//! its seed via per-unit derived RNG streams.

mod catalog;
mod config;
mod scene;

pub use catalog::{AssetCatalog, AssetSpec, Category, Mount};
pub use config::{
    generate_configurations, Configuration, ObstacleSpec, TargetSpec, OBSTACLE_PLACEMENT_RADIUS,
};
pub use scene::{
    generate_scene, ArticulatedTarget, FurnitureItem, SceneSpec, DEFAULT_COUNTER_HEIGHT,
    DEFAULT_WALL_LENGTH,
};
