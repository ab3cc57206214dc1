#![no_main]
use libfuzzer_sys::fuzz_target;
use muntzlab::specfile::parse_polynomial;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_polynomial(text) {
        let _ = f.eval(0.5);
        let _ = f.roots();
    }
});
