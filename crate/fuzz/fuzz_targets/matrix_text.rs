#![no_main]
use libfuzzer_sys::fuzz_target;
use sqpc::matrix_text::{parse_unitary, render_unitary};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(u) = parse_unitary(text) {
        assert_eq!(parse_unitary(&render_unitary(&u)).expect("round trip"), u);
    }
});
