#![no_main]
use libfuzzer_sys::fuzz_target;
use sdbar::slideglue::GluingJson;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(mut g) = GluingJson::parse(s) {
        g.result = None;
        let _ = g.run();
    }
});
