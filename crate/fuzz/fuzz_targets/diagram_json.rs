#![no_main]
use libfuzzer_sys::fuzz_target;
use sdbar::diagram::DiagramJson;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = DiagramJson::parse(s) {
        // anything accepted must survive a round trip
        let again = DiagramJson::parse(&d.to_string_pretty()).expect("reparse");
        assert_eq!(again, d);
        if d.coords.is_some() {
            let _ = d.to_metric();
        }
    }
});
