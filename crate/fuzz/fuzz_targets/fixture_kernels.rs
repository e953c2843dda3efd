#![no_main]
use libfuzzer_sys::fuzz_target;
use std::path::Path;
use x0maps::ingest::fixture::parse_kernels;

fuzz_target!(|data: &str| {
    let _ = parse_kernels(Path::new("kernels.jsonl"), data);
});
