#![no_main]

use bbim::problems::{parse_gset, write_gset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(graph) = parse_gset(text) {
        let canonical = write_gset(&graph);
        let reparsed = parse_gset(&canonical).expect("canonical gset must re-parse");
        assert_eq!(canonical, write_gset(&reparsed));
    }
});
