#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::expr::parse_points;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(points) = parse_points(s) {
            if let Some(first) = points.first() {
                assert!(points.iter().all(|p| p.len() == first.len()));
            }
        }
    }
});
