//! Fuzzes the robot-catalog JSON schema and per-entry validation.

#![no_main]

use affgen::labeler::RobotSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(robots) = serde_json::from_slice::<Vec<RobotSpec>>(data) {
        for robot in &robots {
            if robot.validate().is_ok() {
                let _ = robot.approach_half_width();
            }
        }
    }
});
