#![no_main]

use bbim::model::IsingInstance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = IsingInstance::parse(text) {
        // accepted inputs must round-trip through the canonical writer
        let reparsed = IsingInstance::parse(&inst.to_text())
            .expect("canonical text must re-parse");
        assert_eq!(inst.to_text(), reparsed.to_text());
    }
});
