use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// End-effector type; it determines how much lateral clearance the approach
/// path needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndEffector {
    Gripper,
    Suction,
}

/// Per-robot parameters used by the feasibility oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub name: String,
    /// Maximum arm reach from the shoulder, meters.
    pub arm_reach: f64,
    /// Minimum useful reach (the arm cannot grasp at its own base), meters.
    pub min_reach: f64,
    /// Shoulder height above the floor, meters.
    pub base_height: f64,
    /// Radius of the circular base footprint, meters.
    pub base_radius: f64,
    pub end_effector: EndEffector,
}

impl RobotSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_reach >= 0.0 && self.min_reach < self.arm_reach) {
            return Err(Error::param(
                "min_reach",
                format!(
                    "need 0 <= min_reach < arm_reach, got {} vs {}",
                    self.min_reach, self.arm_reach
                ),
            ));
        }
        if !(self.base_radius > 0.0 && self.base_radius.is_finite()) {
            return Err(Error::param("base_radius", "must be positive"));
        }
        if !(self.base_height >= 0.0 && self.base_height.is_finite()) {
            return Err(Error::param("base_height", "must be non-negative"));
        }
        if !self.arm_reach.is_finite() {
            return Err(Error::param("arm_reach", "must be finite"));
        }
        Ok(())
    }

    /// Half-width of the floor corridor the approach path must keep clear:
    /// grippers need finger clearance, suction cups less.
    pub fn approach_half_width(&self) -> f64 {
        match self.end_effector {
            EndEffector::Gripper => 0.08,
            EndEffector::Suction => 0.04,
        }
    }

    /// The built-in robot roster. Only xarm6 has a distinct base height.
    pub fn default_catalog() -> Vec<RobotSpec> {
        let mk = |name: &str, arm_reach: f64, base_height: f64, end_effector: EndEffector| RobotSpec {
            name: name.into(),
            arm_reach,
            min_reach: 0.15,
            base_height,
            base_radius: 0.25,
            end_effector,
        };
        vec![
            mk("panda", 0.85, 0.30, EndEffector::Gripper),
            mk("xarm6", 0.70, 0.45, EndEffector::Gripper),
            mk("ur5e", 0.85, 0.30, EndEffector::Suction),
            mk("flexiv", 0.80, 0.30, EndEffector::Gripper),
        ]
    }

    /// Looks a robot up by name in a catalog slice.
    pub fn by_name<'a>(catalog: &'a [RobotSpec], name: &str) -> Option<&'a RobotSpec> {
        catalog.iter().find(|r| r.name == name)
    }

    /// Loads a robot catalog (a JSON list of `RobotSpec`) and validates every
    /// entry and name uniqueness.
    pub fn load_catalog(path: &Path) -> Result<Vec<RobotSpec>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let robots: Vec<RobotSpec> = serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.into(),
            source: e,
        })?;
        let mut seen = std::collections::BTreeSet::new();
        for r in &robots {
            r.validate()?;
            if !seen.insert(r.name.clone()) {
                return Err(Error::param("robots", format!("duplicate name '{}'", r.name)));
            }
        }
        Ok(robots)
    }
}
