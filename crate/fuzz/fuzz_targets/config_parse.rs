#![no_main]

use bwdecay_core::config::Config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = Config::parse(text) {
        let rendered = config.render();
        let again = Config::parse(&rendered).expect("rendered config parses");
        assert_eq!(again, config);
    }
});
