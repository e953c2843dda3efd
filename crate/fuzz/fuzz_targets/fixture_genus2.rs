#![no_main]
use libfuzzer_sys::fuzz_target;
use std::path::Path;
use x0maps::ingest::fixture::parse_genus2;

fuzz_target!(|data: &str| {
    if let Ok(table) = parse_genus2(Path::new("genus2.json"), data) {
        let _ = table.excludes(223, &["223.2.a.a".to_string()]);
    }
});
