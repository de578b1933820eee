#![no_main]

use boxprompt::render::{decode_ppm, encode_ppm};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode_ppm(data) {
        assert_eq!(decode_ppm(&encode_ppm(&img)).unwrap(), img);
    }
});
