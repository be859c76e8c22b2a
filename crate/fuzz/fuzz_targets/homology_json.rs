#![no_main]
use libfuzzer_sys::fuzz_target;
use sdbar::homology::HomologyJson;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(h) = HomologyJson::parse(s) {
        let body = serde_json::to_string(&h).expect("serialize");
        assert_eq!(HomologyJson::parse(&body).expect("reparse"), h);
    }
});
