//! Fuzzes the binary array container decoder.

#![no_main]

use std::path::Path;

use affgen::datastore::ArrayFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(parsed) = ArrayFile::from_bytes(data, Path::new("fuzz")) {
        // The format has no slack (exact payload length, fixed header), so
        // any accepted input must re-serialize to the identical bytes.
        assert_eq!(parsed.to_bytes(), data);
    }
});
