#![no_main]

use libfuzzer_sys::fuzz_target;
use prologi_core::parse_term;
use prologi_core::syntax::render_term;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(term) = parse_term(text) {
        let rendered = render_term(&term);
        let again = parse_term(&rendered).expect("rendered term parses");
        assert_eq!(render_term(&again), rendered);
    }
});
