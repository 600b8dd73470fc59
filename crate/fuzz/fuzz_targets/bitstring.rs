#![no_main]
use libfuzzer_sys::fuzz_target;
use sqpc::BitString;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(bits) = text.parse::<BitString>() {
        assert_eq!(bits.to_string(), text);
        assert!(bits.xor(&bits).unwrap().is_all_zero());
    }
});
