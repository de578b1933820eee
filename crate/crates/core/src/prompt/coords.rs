//! Text-coordinate baseline: every box at every keyframe spelled out as
//! `<label>: frame <k> [x1 y1 x2 y2], frame <k'> [...]`.

use crate::temporal::SamplePlan;
use crate::trackmodel::{BoundingBox, Track, TrackSet};

/// `round(100 * coord / dimension)`, halves up, clamped to `[0, 100]`.
pub fn quantize(coord: i32, dimension: u32) -> u32 {
    let dim = i64::from(dimension.max(1));
    let c = i64::from(coord).clamp(0, dim);
    ((200 * c + dim) / (2 * dim)) as u32
}

pub fn quantize_box(b: &BoundingBox, width: u32, height: u32) -> [u32; 4] {
    [
        quantize(b.x1(), width),
        quantize(b.y1(), height),
        quantize(b.x2(), width),
        quantize(b.y2(), height),
    ]
}

/// One track's line. `k` is the 1-based position in the plan; keyframes
/// where the track is absent are left out.
pub fn serialize_track_coords(track: &Track, plan: &SamplePlan, width: u32, height: u32) -> String {
    let entries: Vec<String> = plan
        .indices
        .iter()
        .enumerate()
        .filter_map(|(k, frame)| {
            let [x1, y1, x2, y2] = quantize_box(track.box_at(*frame)?, width, height);
            Some(format!("frame {} [{x1} {y1} {x2} {y2}]", k + 1))
        })
        .collect();
    format!("{}: {}", track.label, entries.join(", "))
}

/// All tracks, one line each, joined by `\n` (no trailing newline).
pub fn serialize_text_coords(ts: &TrackSet, plan: &SamplePlan) -> String {
    ts.tracks()
        .iter()
        .map(|t| serialize_track_coords(t, plan, ts.meta.width, ts.meta.height))
        .collect::<Vec<_>>()
        .join("\n")
}
