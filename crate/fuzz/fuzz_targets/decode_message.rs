#![no_main]

use libfuzzer_sys::fuzz_target;
use prologi_core::protocol::{decode, encode};

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    match decode(line) {
        Ok(msg) => assert_eq!(decode(&encode(&msg)).expect("encoded message decodes"), msg),
        Err(e) => assert!(e.offset <= line.len()),
    }
});
