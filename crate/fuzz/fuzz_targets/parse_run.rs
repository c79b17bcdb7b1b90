#![no_main]

use libfuzzer_sys::fuzz_target;
use zakharov_core::harness::{parse_run, run_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(record) = parse_run(text) {
        let again = parse_run(&run_csv(&record)).expect("re-parse");
        assert_eq!(run_csv(&again), run_csv(&record));
    }
});
