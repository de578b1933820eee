#![no_main]

use boxprompt::detpost::{detections_to_json, parse_detections_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(dets) = parse_detections_json(data) {
        let again = parse_detections_json(detections_to_json(&dets).as_bytes()).unwrap();
        assert_eq!(again, dets);
    }
});
