#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::cli::parse_orders;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok((lo, hi)) = parse_orders(s) {
            assert!(lo <= hi);
        }
    }
});
