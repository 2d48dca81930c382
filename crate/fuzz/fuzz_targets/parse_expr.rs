#![no_main]

use libfuzzer_sys::fuzz_target;
use nhcurv::expr::{parse_field, parse_form, parse_polynomial};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = parse_polynomial(s, None) {
            assert_eq!(parse_polynomial(&p.to_string(), Some(p.n_vars())).unwrap(), p);
        }
        if let Ok(x) = parse_field(s, None) {
            assert_eq!(parse_field(&x.to_string(), Some(x.n_vars())).unwrap(), x);
        }
        if let Ok(a) = parse_form(s, None) {
            assert_eq!(parse_form(&a.to_string(), Some(a.n_vars())).unwrap(), a);
        }
    }
});
