use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What an asset is used as during generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// Small graspable object placed on countertops.
    RigidTarget,
    /// Furniture with a handle (fridge, dishwasher, ...) that is itself a
    /// manipulation target.
    ArticulatedTarget,
    /// Floor clutter blocking base placements.
    Obstacle,
    /// Counter-height furniture that can host rigid targets.
    Furniture,
}

/// Where an asset rests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mount {
    Countertop,
    Floor,
}

/// One placeable asset: an axis-aligned box footprint with a height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetSpec {
    pub category: Category,
    pub name: String,
    /// Width (along the wall) x depth (away from the wall), meters.
    pub footprint: [f64; 2],
    pub height: f64,
    pub mount: Mount,
}

impl AssetSpec {
    pub fn half_extents(&self) -> [f64; 2] {
        [self.footprint[0] / 2.0, self.footprint[1] / 2.0]
    }
}

/// The pool of assets scenes and configurations draw from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetCatalog {
    pub entries: Vec<AssetSpec>,
}

impl AssetCatalog {
    /// Checks the catalog invariants: positive dimensions and at least one
    /// entry per category.
    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if !(e.footprint[0] > 0.0 && e.footprint[1] > 0.0 && e.height > 0.0)
                || !e.footprint[0].is_finite()
                || !e.footprint[1].is_finite()
                || !e.height.is_finite()
            {
                return Err(Error::param(
                    "catalog",
                    format!("asset '{}' has non-positive dimensions", e.name),
                ));
            }
        }
        for cat in [
            Category::RigidTarget,
            Category::ArticulatedTarget,
            Category::Obstacle,
            Category::Furniture,
        ] {
            if !self.entries.iter().any(|e| e.category == cat) {
                return Err(Error::param(
                    "catalog",
                    format!("no entry with category {:?}", cat),
                ));
            }
        }
        Ok(())
    }

    pub fn by_category(&self, cat: Category) -> Vec<&AssetSpec> {
        self.entries.iter().filter(|e| e.category == cat).collect()
    }

    /// Loads a catalog from a JSON file (see `AssetCatalog` serde shape) and
    /// validates it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let catalog: AssetCatalog = serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.into(),
            source: e,
        })?;
        catalog.validate()?;
        Ok(catalog)
    }

    /// The built-in kitchen asset set.
    ///
    /// Counter-height furniture is exactly 0.9 m tall so rigid targets always
    /// rest at the default counter height; articulated items carry their own
    /// heights and handles. Dimensions are chosen so that reach envelopes of
    /// the built-in robots produce both feasible and infeasible base cells in
    /// front of every target.
    pub fn default_kitchen() -> Self {
        let f = |name: &str, w: f64, d: f64, h: f64| AssetSpec {
            category: Category::Furniture,
            name: name.into(),
            footprint: [w, d],
            height: h,
            mount: Mount::Floor,
        };
        let a = |name: &str, w: f64, d: f64, h: f64| AssetSpec {
            category: Category::ArticulatedTarget,
            name: name.into(),
            footprint: [w, d],
            height: h,
            mount: Mount::Floor,
        };
        let r = |name: &str, w: f64, d: f64, h: f64| AssetSpec {
            category: Category::RigidTarget,
            name: name.into(),
            footprint: [w, d],
            height: h,
            mount: Mount::Countertop,
        };
        let o = |name: &str, w: f64, d: f64, h: f64| AssetSpec {
            category: Category::Obstacle,
            name: name.into(),
            footprint: [w, d],
            height: h,
            mount: Mount::Floor,
        };
        Self {
            entries: vec![
                f("counter_small", 0.9, 0.45, 0.9),
                f("counter_long", 1.2, 0.45, 0.9),
                f("island_cart", 0.8, 0.42, 0.9),
                f("sink_unit", 0.7, 0.45, 0.9),
                a("fridge", 0.7, 0.65, 1.8),
                a("dishwasher", 0.6, 0.6, 0.85),
                a("oven", 0.6, 0.6, 0.9),
                a("base_cabinet", 0.5, 0.55, 0.8),
                r("mug", 0.09, 0.09, 0.10),
                r("kettle", 0.12, 0.12, 0.20),
                r("cereal_box", 0.08, 0.20, 0.24),
                r("bottle", 0.07, 0.07, 0.24),
                o("trash_bin", 0.30, 0.30, 0.55),
                o("stool", 0.35, 0.35, 0.45),
                o("box_stack", 0.40, 0.30, 0.60),
                o("plant_pot", 0.28, 0.28, 0.70),
            ],
        }
    }
}
