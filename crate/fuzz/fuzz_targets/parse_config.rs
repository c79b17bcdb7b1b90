#![no_main]

use libfuzzer_sys::fuzz_target;
use zakharov_core::config::{parse_config, Config};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(layer) = parse_config(text) else {
        return;
    };
    let mut config = Config::default();
    if config.apply(&layer).is_ok() {
        // an accepted config renders to pairs that parse back to itself
        let rendered: String = config.pairs().iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        let mut back = Config::default();
        back.apply(&parse_config(&rendered).expect("rendered config parses"))
            .expect("rendered config applies");
        assert_eq!(back.pairs(), config.pairs());
    }
});
