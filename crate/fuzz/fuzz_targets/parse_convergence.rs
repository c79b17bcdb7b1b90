#![no_main]

use libfuzzer_sys::fuzz_target;
use zakharov_core::harness::{convergence_csv, parse_convergence};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(record) = parse_convergence(text) {
        let again = parse_convergence(&convergence_csv(&record)).expect("re-parse");
        assert_eq!(convergence_csv(&again), convergence_csv(&record));
    }
});
