#![no_main]
use libfuzzer_sys::fuzz_target;
use sdbar::moduli::ComplexJson;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = ComplexJson::parse(s) {
        let cx = c.to_complex().expect("validated");
        cx.check_d_squared().ok();
    }
});
