#![no_main]
use libfuzzer_sys::fuzz_target;

use graphcode::io::{parse_any, write_graphcode, write_presentation, Input};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse_any(text) {
        Ok(Input::Presentation(p)) => match parse_any(&write_presentation(&p)) {
            Ok(Input::Presentation(q)) => {
                assert_eq!(q.generators(), p.generators());
                assert_eq!(q.relations(), p.relations());
            }
            other => panic!("presentation came back as {other:?}"),
        },
        Ok(Input::Graphcode(g)) => match parse_any(&write_graphcode(&g)) {
            Ok(Input::Graphcode(h)) => assert_eq!(h, g),
            other => panic!("graphcode came back as {other:?}"),
        },
        Err(_) => {}
    }
});
