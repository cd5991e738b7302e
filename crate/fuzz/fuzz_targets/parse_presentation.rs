#![no_main]
use libfuzzer_sys::fuzz_target;

use graphcode::io::{parse_presentation, write_presentation};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_presentation(text) {
        let written = write_presentation(&p);
        let again = parse_presentation(&written).expect("written presentations parse");
        assert_eq!(again.generators(), p.generators());
        assert_eq!(again.relations(), p.relations());
        assert_eq!(write_presentation(&again), written);
    }
});
