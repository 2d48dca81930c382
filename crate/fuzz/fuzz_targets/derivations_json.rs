#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::graded_lie::{heisenberg, is_derivation, DerivationSubalgebra};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let parent = heisenberg(1).unwrap();
        if let Ok(d) = DerivationSubalgebra::from_json_str(&parent, s) {
            assert!(d.basis().iter().all(|m| is_derivation(&parent, 0, m)));
        }
    }
});
