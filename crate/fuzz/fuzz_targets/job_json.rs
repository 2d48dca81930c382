#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::distribution::DistributionJob;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(job) = DistributionJob::from_json_str(s) {
            if let Ok(dist) = job.distribution() {
                if dist.n_vars() <= 6 {
                    let _ = job.points(dist.n_vars());
                }
            }
        }
    }
});
