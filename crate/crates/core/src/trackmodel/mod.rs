//! Videos, tracks and boxes, plus ingestion of annotation files.

mod json;
mod mot;
mod types;
mod validate;

pub(crate) use json::{as_object, decode_box, field, parse_value};
pub use json::{decode_tracks_json, parse_tracks_json, tracks_to_json};
pub use mot::{parse_tracks_mot, tracks_to_mot, MOT_DEFAULT_LABEL};
pub use types::{BoundingBox, Center, Mask, Track, TrackSet, VideoMeta};
pub use validate::{validate_tracks, Diagnostic, Severity};
