//! Form parser must never panic, and every accepted form must survive a
//! render/parse round trip. The zero form is exempt from the round trip:
//! cancellation remembers the degree, the rendered "0" does not.

#![no_main]

use doubleplane::algebra::{parse_form, FieldSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let fields = [FieldSpec::prime(13).unwrap(), FieldSpec::Rationals];
    for field in &fields {
        if let Ok(form) = parse_form(field, text) {
            if form.is_zero() {
                continue;
            }
            let back = parse_form(field, &form.render()).expect("render must re-parse");
            assert_eq!(back, form, "round trip changed the form");
        }
    }
});
