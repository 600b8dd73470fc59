#![no_main]
use libfuzzer_sys::fuzz_target;
use sqpc::protocol::transcript::TranscriptDump;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dump) = TranscriptDump::parse(text) {
        let rendered = dump.render();
        let again = TranscriptDump::parse(&rendered).expect("rendered dump must parse");
        assert_eq!(again.render(), rendered);
    }
});
