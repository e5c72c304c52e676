//! Fuzzes the dataset `manifest.json` schema and the split logic downstream
//! of it.

#![no_main]

use affgen::datastore::{split_dataset, DatasetManifest};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(manifest) = serde_json::from_slice::<DatasetManifest>(data) {
        let _ = split_dataset(&manifest, 0.5, 0);
        serde_json::to_value(&manifest).unwrap();
    }
});
