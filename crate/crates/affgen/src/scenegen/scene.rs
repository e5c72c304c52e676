use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenegen::{AssetCatalog, AssetSpec, Category};
use crate::seed::{self, salt};

/// Default wall length in meters.
pub const DEFAULT_WALL_LENGTH: f64 = 6.0;
/// Default countertop height in meters; every built-in counter-height
/// furniture asset is exactly this tall.
pub const DEFAULT_COUNTER_HEIGHT: f64 = 0.9;

/// Probability that a furniture entry is included in a scene's wall row.
const INCLUDE_P: f64 = 0.8;
/// Rounds of re-drawing the wall row before giving up on placing at least
/// one counter-height furniture item.
const ROW_ROUNDS: usize = 32;

/// One furniture instance placed along the wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FurnitureItem {
    /// Instance id; furniture occupies ids 1..=n in placement order
    /// (id 0 is the floor).
    pub id: u32,
    pub asset: AssetSpec,
    /// Left edge along the wall, meters.
    pub x_offset: f64,
}

impl FurnitureItem {
    /// Footprint interval along the wall: `[x_offset, x_offset + width)`.
    pub fn x_range(&self) -> (f64, f64) {
        (self.x_offset, self.x_offset + self.asset.footprint[0])
    }
}

/// A handle on an articulated furniture item, registered as a potential
/// manipulation target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticulatedTarget {
    /// Instance id of the furniture item carrying the handle.
    pub furniture_id: u32,
    pub name: String,
    /// Handle point on the front face, world meters.
    pub position: [f64; 3],
    /// Outward unit normal of the front face (away from the wall).
    pub frontal: [f64; 2],
}

/// A procedural kitchen: furniture packed along one wall (the x axis, at
/// y = 0, boxes extending toward +y into the room).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub scene_id: u64,
    pub wall_length: f64,
    pub counter_height: f64,
    pub furniture: Vec<FurnitureItem>,
    pub articulated_targets: Vec<ArticulatedTarget>,
}

/// Handle height on an articulated item: three quarters of the way up,
/// capped at a comfortable 0.95 m.
pub(crate) fn handle_height(asset_height: f64) -> f64 {
    (0.75 * asset_height).min(0.95)
}

/// Generates one scene from a seed: a seeded subset of the catalog's
/// furniture and articulated items, shuffled and packed left-to-right along
/// the wall with no gaps. Deterministic in `(seed, catalog)`; the result's
/// `scene_id` is the seed.
///
/// Fails if any furniture entry is wider than the wall (it could be drawn
/// but never placed), or if no counter-height furniture can be placed —
/// rigid targets would have nowhere to stand.
pub fn generate_scene(seed: u64, catalog: &AssetCatalog) -> Result<SceneSpec> {
    catalog.validate()?;
    let wall_length = DEFAULT_WALL_LENGTH;
    let row_pool: Vec<&AssetSpec> = catalog
        .entries
        .iter()
        .filter(|e| matches!(e.category, Category::Furniture | Category::ArticulatedTarget))
        .collect();
    let too_wide: Vec<&str> = row_pool
        .iter()
        .filter(|a| a.footprint[0] > wall_length)
        .map(|a| a.name.as_str())
        .collect();
    if !too_wide.is_empty() {
        return Err(Error::SceneOverflow(format!(
            "furniture wider than the {wall_length} m wall: {}",
            too_wide.join(", ")
        )));
    }

    let mut rng = seed::rng(seed, salt::SCENE, 0, 0);
    for _ in 0..ROW_ROUNDS {
        // Seeded selection, then seeded order.
        let mut row: Vec<&AssetSpec> = row_pool
            .iter()
            .copied()
            .filter(|_| rng.random::<f64>() < INCLUDE_P)
            .collect();
        row.shuffle(&mut rng);
        // Pack left to right, skipping items that no longer fit.
        let mut furniture = Vec::new();
        let mut x = 0.0;
        for asset in row {
            let w = asset.footprint[0];
            if x + w <= wall_length + 1e-9 {
                furniture.push(FurnitureItem {
                    id: furniture.len() as u32 + 1,
                    asset: asset.clone(),
                    x_offset: x,
                });
                x += w;
            }
        }
        if !furniture
            .iter()
            .any(|f| f.asset.category == Category::Furniture)
        {
            continue;
        }
        let articulated_targets = furniture
            .iter()
            .filter(|f| f.asset.category == Category::ArticulatedTarget)
            .map(|f| ArticulatedTarget {
                furniture_id: f.id,
                name: f.asset.name.clone(),
                position: [
                    f.x_offset + f.asset.footprint[0] / 2.0,
                    f.asset.footprint[1],
                    handle_height(f.asset.height),
                ],
                frontal: [0.0, 1.0],
            })
            .collect();
        return Ok(SceneSpec {
            scene_id: seed,
            wall_length,
            counter_height: DEFAULT_COUNTER_HEIGHT,
            furniture,
            articulated_targets,
        });
    }
    Err(Error::SceneOverflow(format!(
        "no counter-height furniture fit on the {wall_length} m wall after {ROW_ROUNDS} rounds"
    )))
}
