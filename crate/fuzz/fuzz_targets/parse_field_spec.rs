//! Field-spec parser must never panic or hang, and every accepted spec must
//! round-trip through its rendering. Extension moduli are canonical, so the
//! rebuilt spec is structurally equal.

#![no_main]

use doubleplane::algebra::parse_field_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_field_spec(text) {
        let back = parse_field_spec(&spec.to_string()).expect("rendering must re-parse");
        assert_eq!(back, spec, "round trip changed the field");
    }
});
