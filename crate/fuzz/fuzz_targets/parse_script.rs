#![no_main]

use libfuzzer_sys::fuzz_target;
use prologi_core::engine::{parse_script, render_script};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(entries) = parse_script(text) {
        let again = parse_script(&render_script(&entries)).expect("rendered script parses");
        assert_eq!(again, entries);
    }
});
