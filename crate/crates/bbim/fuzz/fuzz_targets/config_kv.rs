#![no_main]

use bbim::dynamics::{AnnealSchedule, DynamicsConfig};
use bbim::model::BounceBindParam;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut config =
        DynamicsConfig::new(BounceBindParam::zero(), AnnealSchedule::ramp(64), 64);
    // must never panic; a config accepted by the parser must validate or
    // fail with a structured error, not crash
    if config.apply_kv(text).is_ok() {
        let _ = config.validate();
    }
});
