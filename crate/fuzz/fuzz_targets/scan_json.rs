#![no_main]

use bwdecay_core::scan::{parse_json, to_json_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = parse_json(text) {
        let rendered = to_json_string(&doc.rows, doc.metadata.as_deref());
        let again = parse_json(&rendered).expect("rendered document parses");
        assert_eq!(to_json_string(&again.rows, again.metadata.as_deref()), rendered);
    }
});
