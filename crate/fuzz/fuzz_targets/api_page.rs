#![no_main]
use libfuzzer_sys::fuzz_target;
use serde_json::Value;
use x0maps::ingest::client::{label_key, parse_curve, parse_newform};

// One page of an API response, as returned by mf_newforms or ec_curvedata.
fuzz_target!(|data: &[u8]| {
    let Ok(page) = serde_json::from_slice::<Value>(data) else { return };
    let Some(records) = page.get("data").and_then(Value::as_array) else { return };
    for rec in records {
        if let Ok(f) = parse_newform(rec) {
            let _ = label_key(&f.label);
        }
        let _ = parse_curve(rec);
    }
});
