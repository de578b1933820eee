#![no_main]

use boxprompt::trackmodel::{parse_tracks_mot, VideoMeta};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_tracks_mot(data, VideoMeta::new(640, 480, 300));
});
