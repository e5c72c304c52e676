//! Fuzzes the episode `meta.json` schema.

#![no_main]

use affgen::datastore::EpisodeMeta;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(meta) = serde_json::from_slice::<EpisodeMeta>(data) {
        // Anything that parses must serialize back without error (JSON input
        // cannot carry non-finite floats, the only way serialization fails).
        serde_json::to_value(&meta).unwrap();
    }
});
