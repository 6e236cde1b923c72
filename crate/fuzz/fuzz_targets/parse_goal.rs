#![no_main]

use libfuzzer_sys::fuzz_target;
use prologi_core::parse_goal;
use prologi_core::syntax::render_goal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(goal) = parse_goal(text) {
        let rendered = render_goal(&goal);
        let again = parse_goal(&rendered).expect("rendered goal parses");
        assert_eq!(render_goal(&again), rendered);
    }
});
