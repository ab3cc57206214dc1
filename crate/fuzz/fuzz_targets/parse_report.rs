#![no_main]
use libfuzzer_sys::fuzz_target;
use muntzlab_cli::report::CheckReport;

// A report that parses must serialize back to something that parses to the same report.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = CheckReport::from_json(text) {
        let again = report.to_json().unwrap();
        assert_eq!(CheckReport::from_json(&again).unwrap(), report);
    }
});
