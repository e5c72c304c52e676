use nalgebra::{Vector2, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::footprint::OrientedRect;
use crate::geom::Solid;
use crate::scenegen::{AssetCatalog, AssetSpec, Category, FurnitureItem, SceneSpec};
use crate::seed::{self, salt};

/// Radius of the semicircular floor region in front of a target inside
/// which obstacles are placed, meters.
pub const OBSTACLE_PLACEMENT_RADIUS: f64 = 1.2;

/// Rejection-sampling budget per placed object before it is dropped.
const PLACEMENT_ATTEMPTS: usize = 100;

/// Front fraction of a countertop's depth that rigid targets are kept in,
/// so they stay within arm envelopes from the floor in front.
const FRONT_BIAS: f64 = 0.55;

/// One manipulation target of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    /// Instance id: articulated targets reuse their furniture id; rigid
    /// targets get fresh ids after the furniture block.
    pub id: u32,
    pub asset: AssetSpec,
    /// For rigid targets: base point on the countertop (z = counter height).
    /// For articulated targets: handle point on the front face.
    pub position: [f64; 3],
    /// Unit floor direction the robot approaches along (from the open floor
    /// toward the target); the base region lies on the opposite side.
    pub approach: [f64; 2],
    pub articulated: bool,
}

impl TargetSpec {
    pub fn floor_xy(&self) -> Vector2<f64> {
        Vector2::new(self.position[0], self.position[1])
    }

    pub fn position_v(&self) -> Vector3<f64> {
        Vector3::new(self.position[0], self.position[1], self.position[2])
    }

    pub fn approach_v(&self) -> Vector2<f64> {
        Vector2::new(self.approach[0], self.approach[1])
    }

    /// Point cameras aim at: box center for rigid targets, the handle for
    /// articulated ones.
    pub fn focus_point(&self) -> Vector3<f64> {
        if self.articulated {
            self.position_v()
        } else {
            self.position_v() + Vector3::new(0.0, 0.0, self.asset.height / 2.0)
        }
    }

    /// Countertop footprint of a rigid target.
    pub fn footprint_rect(&self) -> OrientedRect {
        let h = self.asset.half_extents();
        OrientedRect::axis_aligned(self.floor_xy(), Vector2::new(h[0], h[1]))
    }
}

/// One floor obstacle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleSpec {
    pub id: u32,
    pub asset: AssetSpec,
    /// Footprint center on the floor.
    pub position: [f64; 2],
    /// Quarter-turn yaw in radians, so the rendered box stays axis-aligned.
    pub yaw: f64,
}

impl ObstacleSpec {
    pub fn rect(&self) -> OrientedRect {
        let h = self.asset.half_extents();
        OrientedRect::new(
            Vector2::new(self.position[0], self.position[1]),
            Vector2::new(h[0], h[1]),
            self.yaw,
        )
    }
}

/// One target/obstacle arrangement inside a scene. Carries a copy of the
/// scene's furniture row so rendering and feasibility checks need no side
/// lookups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub config_id: u64,
    pub scene_id: u64,
    pub wall_length: f64,
    pub counter_height: f64,
    pub furniture: Vec<FurnitureItem>,
    /// Articulated targets first (scene order), then rigid targets.
    pub targets: Vec<TargetSpec>,
    pub obstacles: Vec<ObstacleSpec>,
    /// The target this configuration's episodes are sampled around.
    pub primary_target: u32,
}

impl Configuration {
    pub fn target(&self, target_id: u32) -> Option<&TargetSpec> {
        self.targets.iter().find(|t| t.id == target_id)
    }

    pub fn furniture_rects(&self) -> Vec<OrientedRect> {
        self.furniture
            .iter()
            .map(|f| {
                let h = f.asset.half_extents();
                OrientedRect::axis_aligned(
                    Vector2::new(f.x_offset + h[0], h[1]),
                    Vector2::new(h[0], h[1]),
                )
            })
            .collect()
    }

    pub fn obstacle_rects(&self) -> Vec<OrientedRect> {
        self.obstacles.iter().map(ObstacleSpec::rect).collect()
    }

    /// All renderable boxes: furniture, rigid targets on their counters, and
    /// obstacles. Obstacle yaws are quarter turns, so the corner-derived
    /// bounding box is the exact footprint.
    pub fn solids(&self) -> Vec<Solid> {
        let mut out = Vec::new();
        for f in &self.furniture {
            let h = f.asset.half_extents();
            out.push(Solid::from_footprint(
                f.id,
                [f.x_offset + h[0], h[1]],
                h,
                0.0,
                f.asset.height,
            ));
        }
        for t in &self.targets {
            if t.articulated {
                continue; // the furniture box is the target
            }
            out.push(Solid::from_footprint(
                t.id,
                [t.position[0], t.position[1]],
                t.asset.half_extents(),
                t.position[2],
                t.asset.height,
            ));
        }
        for o in &self.obstacles {
            let corners = o.rect().corners();
            let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
            let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for c in corners {
                min_x = min_x.min(c.x);
                min_y = min_y.min(c.y);
                max_x = max_x.max(c.x);
                max_y = max_y.max(c.y);
            }
            out.push(Solid {
                id: o.id,
                min: Vector3::new(min_x, min_y, 0.0),
                max: Vector3::new(max_x, max_y, o.asset.height),
            });
        }
        out
    }
}

/// Draws `count` configurations for a scene: 1-3 rigid targets on
/// counter-height furniture (front-biased), the scene's articulated targets,
/// and per target 1-3 obstacles rejection-sampled inside the semicircle of
/// radius [`OBSTACLE_PLACEMENT_RADIUS`] in front of it. Obstacles that fail
/// placement after 100 attempts are dropped with a structured stderr line.
/// Deterministic in `(scene, seed, count, catalog)`.
pub fn generate_configurations(
    scene: &SceneSpec,
    seed: u64,
    count: usize,
    catalog: &AssetCatalog,
) -> Result<Vec<Configuration>> {
    if count == 0 {
        return Err(Error::param("count", "must be at least 1"));
    }
    let rigid_pool = catalog.by_category(Category::RigidTarget);
    if rigid_pool.is_empty() {
        return Err(Error::param("catalog", "no rigid-target entries"));
    }
    let obstacle_pool = catalog.by_category(Category::Obstacle);
    let counters: Vec<&FurnitureItem> = scene
        .furniture
        .iter()
        .filter(|f| f.asset.category == Category::Furniture)
        .collect();
    if counters.is_empty() {
        return Err(Error::param("scene", "no counter-height furniture"));
    }

    let furniture_rects: Vec<OrientedRect> = scene
        .furniture
        .iter()
        .map(|f| {
            let h = f.asset.half_extents();
            OrientedRect::axis_aligned(Vector2::new(f.x_offset + h[0], h[1]), Vector2::new(h[0], h[1]))
        })
        .collect();

    let mut configs = Vec::with_capacity(count);
    for ci in 0..count {
        let mut rng = seed::rng(seed, salt::CONFIG, ci as u64, 0);
        let mut next_id = scene.furniture.len() as u32 + 1;

        let mut targets: Vec<TargetSpec> = scene
            .articulated_targets
            .iter()
            .map(|a| TargetSpec {
                id: a.furniture_id,
                asset: scene
                    .furniture
                    .iter()
                    .find(|f| f.id == a.furniture_id)
                    .expect("articulated target references placed furniture")
                    .asset
                    .clone(),
                position: a.position,
                approach: [-a.frontal[0], -a.frontal[1]],
                articulated: true,
            })
            .collect();

        // Rigid targets, front-biased on countertops, non-overlapping.
        let n_rigid = rng.random_range(1..=3usize);
        let mut placed_rigid = 0;
        for _ in 0..n_rigid {
            for _attempt in 0..PLACEMENT_ATTEMPTS {
                let counter = counters[rng.random_range(0..counters.len())];
                let asset = rigid_pool[rng.random_range(0..rigid_pool.len())];
                let [hw, hd] = asset.half_extents();
                let (x_lo, x_hi) = (counter.x_offset + hw, counter.x_offset + counter.asset.footprint[0] - hw);
                let depth = counter.asset.footprint[1];
                let (y_lo, y_hi) = ((FRONT_BIAS * depth).max(hd), depth - hd);
                if x_lo >= x_hi || y_lo >= y_hi {
                    continue;
                }
                let x = rng.random_range(x_lo..x_hi);
                let y = rng.random_range(y_lo..y_hi);
                let rect = OrientedRect::axis_aligned(Vector2::new(x, y), Vector2::new(hw, hd));
                let clash = targets
                    .iter()
                    .filter(|t| !t.articulated)
                    .any(|t| t.footprint_rect().overlaps_rect(&rect));
                if !clash {
                    targets.push(TargetSpec {
                        id: next_id,
                        asset: asset.clone(),
                        position: [x, y, scene.counter_height],
                        approach: [0.0, -1.0],
                        articulated: false,
                    });
                    next_id += 1;
                    placed_rigid += 1;
                    break;
                }
            }
        }
        if placed_rigid == 0 {
            // Pathological catalog/counter combination: force one target at
            // the center of the first counter to keep the 1-3 invariant.
            let counter = counters[0];
            let asset = rigid_pool[0];
            targets.push(TargetSpec {
                id: next_id,
                asset: asset.clone(),
                position: [
                    counter.x_offset + counter.asset.footprint[0] / 2.0,
                    counter.asset.footprint[1] * 0.75,
                    scene.counter_height,
                ],
                approach: [0.0, -1.0],
                articulated: false,
            });
            next_id += 1;
            eprintln!(
                "event=forced_target scene={} config={ci}",
                scene.scene_id
            );
        }

        let primary_target = targets[rng.random_range(0..targets.len())].id;

        // Obstacles: 1-3 per target inside its frontal semicircle.
        let mut obstacles: Vec<ObstacleSpec> = Vec::new();
        if !obstacle_pool.is_empty() {
            let target_anchors: Vec<(Vector2<f64>, Vector2<f64>)> = targets
                .iter()
                .map(|t| (t.floor_xy(), -t.approach_v()))
                .collect();
            for (anchor, frontal) in target_anchors {
                let tangent = Vector2::new(-frontal.y, frontal.x);
                let n_obs = rng.random_range(1..=3usize);
                for _ in 0..n_obs {
                    let mut placed = false;
                    for _attempt in 0..PLACEMENT_ATTEMPTS {
                        let asset = obstacle_pool[rng.random_range(0..obstacle_pool.len())];
                        // Area-uniform draw over the frontal semicircle.
                        let r = OBSTACLE_PLACEMENT_RADIUS * rng.random::<f64>().sqrt();
                        let phi = rng.random_range(0.0..std::f64::consts::PI);
                        let pos = anchor + tangent * (r * phi.cos()) + frontal * (r * phi.sin());
                        let yaw = f64::from(rng.random_range(0..4u8)) * std::f64::consts::FRAC_PI_2;
                        let [hw, hd] = asset.half_extents();
                        let rect = OrientedRect::new(pos, Vector2::new(hw, hd), yaw);
                        let clash = furniture_rects.iter().any(|f| f.overlaps_rect(&rect))
                            || obstacles.iter().any(|o| o.rect().overlaps_rect(&rect));
                        if !clash {
                            obstacles.push(ObstacleSpec {
                                id: next_id,
                                asset: asset.clone(),
                                position: [pos.x, pos.y],
                                yaw,
                            });
                            next_id += 1;
                            placed = true;
                            break;
                        }
                    }
                    if !placed {
                        eprintln!(
                            "event=obstacle_drop scene={} config={ci} attempts={PLACEMENT_ATTEMPTS}",
                            scene.scene_id
                        );
                    }
                }
            }
        }

        configs.push(Configuration {
            config_id: ci as u64,
            scene_id: scene.scene_id,
            wall_length: scene.wall_length,
            counter_height: scene.counter_height,
            furniture: scene.furniture.clone(),
            targets,
            obstacles,
            primary_target,
        });
    }
    Ok(configs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenegen::generate_scene;

    fn sample() -> (SceneSpec, AssetCatalog) {
        let cat = AssetCatalog::default_kitchen();
        let scene = generate_scene(11, &cat).unwrap();
        (scene, cat)
    }

    #[test]
    fn determinism_and_count() {
        let (scene, cat) = sample();
        let a = generate_configurations(&scene, 5, 5, &cat).unwrap();
        let b = generate_configurations(&scene, 5, 5, &cat).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn target_counts_include_articulated() {
        let (scene, cat) = sample();
        let n_art = scene.articulated_targets.len();
        for c in generate_configurations(&scene, 5, 5, &cat).unwrap() {
            let rigid = c.targets.iter().filter(|t| !t.articulated).count();
            assert!((1..=3).contains(&rigid), "rigid count {rigid}");
            assert_eq!(c.targets.len(), rigid + n_art);
            // Primary target is one of the listed targets.
            assert!(c.target(c.primary_target).is_some());
        }
    }

    #[test]
    fn rigid_targets_sit_on_countertops() {
        let (scene, cat) = sample();
        for c in generate_configurations(&scene, 1, 10, &cat).unwrap() {
            for t in c.targets.iter().filter(|t| !t.articulated) {
                assert_eq!(t.position[2], scene.counter_height);
                // Fully supported by exactly one counter-height furniture item.
                let host = scene.furniture.iter().find(|f| {
                    f.asset.category == Category::Furniture
                        && t.position[0] - t.asset.half_extents()[0] >= f.x_offset - 1e-9
                        && t.position[0] + t.asset.half_extents()[0]
                            <= f.x_offset + f.asset.footprint[0] + 1e-9
                });
                let host = host.expect("target hangs off every counter");
                let depth = host.asset.footprint[1];
                assert!(t.position[1] - t.asset.half_extents()[1] >= -1e-9);
                assert!(t.position[1] + t.asset.half_extents()[1] <= depth + 1e-9);
            }
        }
    }

    /// Brute-force pairwise disjointness oracle over all floor footprints.
    #[test]
    fn obstacle_footprints_are_pairwise_disjoint() {
        let (scene, cat) = sample();
        for c in generate_configurations(&scene, 3, 20, &cat).unwrap() {
            let obs = c.obstacle_rects();
            let furn = c.furniture_rects();
            for i in 0..obs.len() {
                for j in i + 1..obs.len() {
                    assert!(!obs[i].overlaps_rect(&obs[j]), "obstacles {i},{j} overlap");
                }
                for f in &furn {
                    assert!(!obs[i].overlaps_rect(f), "obstacle {i} under furniture");
                }
            }
        }
    }

    #[test]
    fn obstacles_stay_in_front_semicircles() {
        let (scene, cat) = sample();
        for c in generate_configurations(&scene, 9, 10, &cat).unwrap() {
            for o in &c.obstacles {
                let pos = Vector2::new(o.position[0], o.position[1]);
                let near_some_target = c.targets.iter().any(|t| {
                    let d = pos - t.floor_xy();
                    d.norm() <= OBSTACLE_PLACEMENT_RADIUS + 1e-9 && d.dot(&-t.approach_v()) >= -1e-9
                });
                assert!(near_some_target, "obstacle at {pos:?} outside every semicircle");
                // Quarter-turn yaw only.
                let q = o.yaw / std::f64::consts::FRAC_PI_2;
                assert!((q - q.round()).abs() < 1e-12 && (0.0..4.0).contains(&q));
            }
        }
    }

    #[test]
    fn empty_obstacle_pool_gives_zero_obstacles() {
        let (scene, _) = sample();
        let mut cat = AssetCatalog::default_kitchen();
        cat.entries.retain(|e| e.category != Category::Obstacle);
        for c in generate_configurations(&scene, 2, 5, &cat).unwrap() {
            assert!(c.obstacles.is_empty());
        }
    }

    #[test]
    fn instance_ids_are_unique_and_sequential() {
        let (scene, cat) = sample();
        for c in generate_configurations(&scene, 4, 5, &cat).unwrap() {
            let mut seen = std::collections::BTreeSet::new();
            for f in &c.furniture {
                assert!(seen.insert(f.id));
            }
            for t in c.targets.iter().filter(|t| !t.articulated) {
                assert!(seen.insert(t.id), "duplicate id {}", t.id);
            }
            for o in &c.obstacles {
                assert!(seen.insert(o.id), "duplicate id {}", o.id);
            }
            // Articulated targets alias furniture ids.
            for t in c.targets.iter().filter(|t| t.articulated) {
                assert!(seen.contains(&t.id));
            }
            assert!(!seen.contains(&0), "0 is reserved for the floor");
            let max = *seen.iter().max().unwrap();
            assert_eq!(max as usize, seen.len(), "ids are not contiguous");
        }
    }

    #[test]
    fn zero_count_is_rejected() {
        let (scene, cat) = sample();
        assert!(generate_configurations(&scene, 1, 0, &cat).is_err());
    }

    #[test]
    fn solids_cover_all_instances() {
        let (scene, cat) = sample();
        let c = &generate_configurations(&scene, 8, 1, &cat).unwrap()[0];
        let solids = c.solids();
        let rigid = c.targets.iter().filter(|t| !t.articulated).count();
        assert_eq!(solids.len(), c.furniture.len() + rigid + c.obstacles.len());
        for s in &solids {
            assert!(s.min.x < s.max.x && s.min.y < s.max.y && s.min.z < s.max.z);
        }
        // Rigid target boxes rest exactly on the counter plane.
        for t in c.targets.iter().filter(|t| !t.articulated) {
            let s = solids.iter().find(|s| s.id == t.id).unwrap();
            assert_eq!(s.min.z, c.counter_height);
        }
    }
}
