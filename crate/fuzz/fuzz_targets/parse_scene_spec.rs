#![no_main]

use boxprompt::synth::parse_scene_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_scene_spec(data);
});
