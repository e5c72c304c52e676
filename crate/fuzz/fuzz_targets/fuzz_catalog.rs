//! Fuzzes the asset-catalog JSON schema and its validation.

#![no_main]

use affgen::scenegen::AssetCatalog;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(catalog) = serde_json::from_slice::<AssetCatalog>(data) {
        let _ = catalog.validate();
    }
});
