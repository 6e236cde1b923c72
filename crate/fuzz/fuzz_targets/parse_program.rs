#![no_main]

use libfuzzer_sys::fuzz_target;
use prologi_core::parse_program;
use prologi_core::syntax::render_program;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(program) = parse_program(text) {
        let rendered = render_program(&program);
        let again = parse_program(&rendered).expect("rendered program parses");
        assert_eq!(render_program(&again), rendered);
    }
});
