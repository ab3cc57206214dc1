#![no_main]
use libfuzzer_sys::fuzz_target;
use muntzlab::specfile::parse_spectrum;

// Accepted spectra must satisfy the block invariants and survive a round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_spectrum(text) {
        assert!(s.exponents().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.block_starts().first(), Some(&0));
        let again = serde_json::to_string(&s).unwrap();
        assert_eq!(parse_spectrum(&again).unwrap(), s);
    }
});
