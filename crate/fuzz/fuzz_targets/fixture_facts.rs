#![no_main]
use libfuzzer_sys::fuzz_target;
use std::path::Path;
use x0maps::ingest::fixture::parse_facts;

fuzz_target!(|data: &str| {
    if let Ok(facts) = parse_facts(Path::new("facts.json"), data) {
        for n in [11, 193, 197, 269] {
            let _ = facts.curves_of_conductor(n);
            for d in 1..=6 {
                let _ = facts.known_density.status(n, d);
            }
        }
    }
});
