#![no_main]
use libfuzzer_sys::fuzz_target;
use std::path::Path;
use x0maps::ingest::fixture::parse_newforms;
use x0maps::jacobian::validate_factors;

fuzz_target!(|data: &str| {
    if let Ok(levels) = parse_newforms(Path::new("newforms.jsonl"), data) {
        for (p, factors) in &levels {
            let _ = validate_factors(*p, factors);
        }
    }
});
