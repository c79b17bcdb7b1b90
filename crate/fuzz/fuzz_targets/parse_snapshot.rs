#![no_main]

use libfuzzer_sys::fuzz_target;
use zakharov_core::harness::{parse_snapshot, snapshot_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(snapshot) = parse_snapshot(text) {
        let again = parse_snapshot(&snapshot_csv(&snapshot)).expect("re-parse");
        assert_eq!(again.step, snapshot.step);
        assert_eq!(again.fields.grid().modes(), snapshot.fields.grid().modes());
    }
});
