#![no_main]
use libfuzzer_sys::fuzz_target;
use muntzlab::specfile::parse_measure;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mu) = parse_measure(text) {
        assert!(mu.validate().is_ok());
        let _ = mu.mass();
        let _ = mu.tail(0.5);
        let _ = mu.moment(3.0);
    }
});
