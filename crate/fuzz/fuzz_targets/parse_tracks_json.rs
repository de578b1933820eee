#![no_main]

use boxprompt::trackmodel::{parse_tracks_json, tracks_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Anything accepted must survive a trip through the canonical writer.
    if let Ok(ts) = parse_tracks_json(data) {
        let text = tracks_to_json(&ts);
        let again = parse_tracks_json(text.as_bytes()).expect("canonical output parses");
        assert_eq!(again, ts);
    }
});
