#![no_main]

use boxprompt::prompt::{parse_legend_text, render_legend_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(legend) = parse_legend_text(text) {
        assert_eq!(
            parse_legend_text(&render_legend_text(&legend)).unwrap(),
            legend
        );
    }
});
