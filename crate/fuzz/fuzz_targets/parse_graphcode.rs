#![no_main]
use libfuzzer_sys::fuzz_target;

use graphcode::io::{parse_graphcode, write_graphcode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_graphcode(text) {
        assert_eq!(g.validate(), Ok(()));
        let again = parse_graphcode(&write_graphcode(&g)).expect("written graphcodes parse");
        assert_eq!(again, g);
    }
});
