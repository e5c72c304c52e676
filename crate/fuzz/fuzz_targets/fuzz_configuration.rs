//! Fuzzes the `config.json` schema and the geometry accessors the pipeline
//! calls on configurations read back from disk.

#![no_main]

use affgen::scenegen::Configuration;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(config) = serde_json::from_slice::<Configuration>(data) {
        for rect in config
            .obstacle_rects()
            .iter()
            .chain(config.furniture_rects().iter())
        {
            let _ = rect.corners();
        }
        let _ = config.solids();
        let _ = config.target(config.primary_target);
    }
});
