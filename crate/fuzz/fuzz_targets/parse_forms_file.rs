//! Forms-file parser must never panic, accepted files must have pairwise
//! distinct names, and a file rebuilt from the parsed forms must parse back
//! to the same list (zero forms exempt, as in the single-form target).

#![no_main]

use doubleplane::algebra::{parse_forms_file, FieldSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let field = FieldSpec::prime(13).unwrap();
    let Ok(forms) = parse_forms_file(&field, text) else {
        return;
    };
    for (i, (name, _)) in forms.iter().enumerate() {
        assert!(
            forms[..i].iter().all(|(n, _)| n != name),
            "duplicate name {name} slipped through"
        );
    }
    if forms.iter().any(|(_, f)| f.is_zero()) {
        return;
    }
    let rebuilt: String = forms
        .iter()
        .map(|(n, f)| format!("{n} = {}\n", f.render()))
        .collect();
    let back = parse_forms_file(&field, &rebuilt).expect("rebuilt file must parse");
    assert_eq!(back, forms, "round trip changed the file");
});
