#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::graded_lie::GradedLieAlgebra;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = GradedLieAlgebra::from_json_str(s) {
            let text = serde_json::to_string(&g.to_json()).unwrap();
            assert_eq!(GradedLieAlgebra::from_json_str(&text).unwrap(), g);
            if g.dim() <= 8 {
                let _ = g.check_jacobi();
            }
        }
    }
});
