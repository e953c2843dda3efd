#![no_main]
use libfuzzer_sys::fuzz_target;
use x0maps::cli::LevelRange;

fuzz_target!(|data: &str| {
    if let Ok(r) = data.parse::<LevelRange>() {
        assert!(r.lo >= 1);
        if r.hi.saturating_sub(r.lo) < 10_000 {
            assert!(r.primes().iter().all(|&p| r.lo <= p && p <= r.hi));
        }
    }
});
