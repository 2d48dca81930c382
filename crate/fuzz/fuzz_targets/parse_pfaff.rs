#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::distribution::Distribution;
use nhcurv::expr::parse_pfaff;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = parse_pfaff(s, None) {
            if p.n_vars() <= 6 {
                let _ = Distribution::from_pfaff(&p);
            }
        }
    }
});
