#![no_main]

use bwdecay_core::scan::{parse_csv, to_csv_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_csv(text) {
        let rendered = to_csv_string(&rows, None);
        let again = parse_csv(&rendered).expect("rendered rows parse");
        assert_eq!(to_csv_string(&again, None), rendered);
    }
});
