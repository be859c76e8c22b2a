#![no_main]
use libfuzzer_sys::fuzz_target;
use sdbar::slideglue::parse_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_spec(s) {
        let _ = spec.check(4, 4);
    }
});
