//! Canonical JSON form of a [`TrackSet`].
//!
//! ```text
//! { "meta": {"width":W,"height":H,"total_frames":F,"fps":R|null},
//!   "tracks": [ {"id":I,"label":"str","confidence":C|null,
//!                "boxes": {"<frame>": [x1,y1,x2,y2], ...}} ] }
//! ```
//!
//! Decoding goes through an untyped [`Value`] so that schema violations can
//! be reported with the offending field and track id rather than serde's
//! positional messages.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};
use serde_json::{Map, Value};

use super::types::{BoundingBox, Track, TrackSet, VideoMeta};
use super::validate::{validate_tracks, Severity};
use crate::error::{Error, Result};

/// Parses and validates a track file. Any error-severity diagnostic from
/// [`validate_tracks`] is returned as an error; warnings are dropped.
pub fn parse_tracks_json(bytes: &[u8]) -> Result<TrackSet> {
    let ts = decode_tracks_json(bytes)?;
    if let Some(d) = validate_tracks(&ts)
        .into_iter()
        .find(|d| d.severity == Severity::Error)
    {
        return Err(Error::validation(d.track_id, d.field(), d.message));
    }
    Ok(ts)
}

/// Decodes the schema without running the semantic checks of
/// [`validate_tracks`] (duplicate ids, frame range, bounds).
pub fn decode_tracks_json(bytes: &[u8]) -> Result<TrackSet> {
    let root = parse_value(bytes)?;
    let root = as_object(&root, None, "$")?;

    let meta = decode_meta(field(root, None, "meta")?)?;
    let tracks = match field(root, None, "tracks")? {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, v)| decode_track(v, i))
            .collect::<Result<Vec<_>>>()?,
        _ => return Err(Error::validation(None, "tracks", "expected an array")),
    };
    Ok(TrackSet::new(meta, tracks))
}

/// Serializes to the canonical form: tracks in set order, frames ascending.
pub fn tracks_to_json(ts: &TrackSet) -> String {
    serde_json::to_string_pretty(&CanonicalSet(ts)).expect("track set serializes")
}

pub(crate) fn parse_value(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes).map_err(|e| Error::Json {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })
}

/// serde_json reports 1-based line and column; translate to a byte offset.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let line_start = if line <= 1 {
        0
    } else {
        bytes
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == b'\n')
            .nth(line - 2)
            .map_or(bytes.len(), |(i, _)| i + 1)
    };
    (line_start + column.saturating_sub(1)).min(bytes.len())
}

pub(crate) fn as_object<'a>(
    v: &'a Value,
    track_id: Option<u64>,
    name: &str,
) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::validation(track_id, name, "expected an object"))
}

pub(crate) fn field<'a>(
    obj: &'a Map<String, Value>,
    track_id: Option<u64>,
    name: &str,
) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::validation(track_id, name, "missing field"))
}

fn positive_u32(v: &Value, name: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            Error::validation(None, format!("meta.{name}"), "expected a positive integer")
        })
}

fn decode_meta(v: &Value) -> Result<VideoMeta> {
    let obj = as_object(v, None, "meta")?;
    let width = positive_u32(field(obj, None, "width")?, "width")?;
    let height = positive_u32(field(obj, None, "height")?, "height")?;
    let total_frames = positive_u32(field(obj, None, "total_frames")?, "total_frames")?;
    let fps = match obj.get("fps") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_f64()
                .filter(|r| r.is_finite() && *r > 0.0)
                .ok_or_else(|| {
                    Error::validation(None, "meta.fps", "expected a positive number or null")
                })?,
        ),
    };
    Ok(VideoMeta {
        width,
        height,
        total_frames,
        fps,
    })
}

fn decode_track(v: &Value, position: usize) -> Result<Track> {
    let obj = as_object(v, None, &format!("tracks[{position}]"))?;
    let track_id = match obj.get("id") {
        Some(id) => id.as_u64().ok_or_else(|| {
            Error::validation(
                None,
                format!("tracks[{position}].id"),
                "expected a non-negative integer",
            )
        })?,
        None => {
            return Err(Error::validation(
                None,
                format!("tracks[{position}].id"),
                "missing field",
            ))
        }
    };
    let id = Some(track_id);

    let label = field(obj, id, "label")?
        .as_str()
        .ok_or_else(|| Error::validation(id, "label", "expected a string"))?
        .to_owned();

    let confidence = match obj.get("confidence") {
        None | Some(Value::Null) => None,
        Some(c) => Some(
            c.as_f64()
                .ok_or_else(|| Error::validation(id, "confidence", "expected a number or null"))?,
        ),
    };

    let boxes_obj = as_object(field(obj, id, "boxes")?, id, "boxes")?;
    let mut boxes = BTreeMap::new();
    for (key, value) in boxes_obj {
        let frame = parse_frame_key(key).ok_or_else(|| {
            Error::validation(
                id,
                format!("boxes[{key:?}]"),
                "frame key must be a non-negative integer",
            )
        })?;
        let bbox = decode_box(value, id, &format!("boxes[{key:?}]"))?;
        if boxes.insert(frame, bbox).is_some() {
            return Err(Error::validation(
                id,
                format!("boxes[{key:?}]"),
                "duplicate frame",
            ));
        }
    }

    Ok(Track {
        track_id,
        label,
        boxes,
        confidence,
    })
}

fn parse_frame_key(key: &str) -> Option<u32> {
    if key.is_empty() || !key.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    key.parse().ok()
}

const COORD_NAMES: [&str; 4] = ["x1", "y1", "x2", "y2"];

pub(crate) fn decode_box(v: &Value, track_id: Option<u64>, name: &str) -> Result<BoundingBox> {
    let items = match v {
        Value::Array(items) if items.len() == 4 => items,
        _ => {
            return Err(Error::validation(
                track_id,
                name,
                "expected [x1, y1, x2, y2]",
            ))
        }
    };
    let mut c = [0i32; 4];
    for (slot, (item, coord)) in c.iter_mut().zip(items.iter().zip(COORD_NAMES)) {
        let n = item.as_i64().ok_or_else(|| {
            Error::validation(track_id, format!("{name}.{coord}"), "expected an integer")
        })?;
        if n < 0 {
            return Err(Error::validation(
                track_id,
                format!("{name}.{coord}"),
                "negative coordinate",
            ));
        }
        *slot = i32::try_from(n).map_err(|_| {
            Error::validation(
                track_id,
                format!("{name}.{coord}"),
                "coordinate out of range",
            )
        })?;
    }
    BoundingBox::new(c[0], c[1], c[2], c[3])
        .map_err(|_| Error::validation(track_id, name, "degenerate box"))
}

struct CanonicalSet<'a>(&'a TrackSet);
struct CanonicalMeta<'a>(&'a VideoMeta);
struct CanonicalTrack<'a>(&'a Track);
struct CanonicalBoxes<'a>(&'a BTreeMap<u32, BoundingBox>);

impl Serialize for CanonicalSet<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TrackSet", 2)?;
        st.serialize_field("meta", &CanonicalMeta(&self.0.meta))?;
        let tracks: Vec<_> = self.0.tracks().iter().map(CanonicalTrack).collect();
        st.serialize_field("tracks", &tracks)?;
        st.end()
    }
}

impl Serialize for CanonicalMeta<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VideoMeta", 4)?;
        st.serialize_field("width", &self.0.width)?;
        st.serialize_field("height", &self.0.height)?;
        st.serialize_field("total_frames", &self.0.total_frames)?;
        st.serialize_field("fps", &self.0.fps)?;
        st.end()
    }
}

impl Serialize for CanonicalTrack<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = self.0;
        let mut st = s.serialize_struct("Track", 4)?;
        st.serialize_field("id", &t.track_id)?;
        st.serialize_field("label", &t.label)?;
        st.serialize_field("confidence", &t.confidence)?;
        st.serialize_field("boxes", &CanonicalBoxes(&t.boxes))?;
        st.end()
    }
}

impl Serialize for CanonicalBoxes<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (frame, b) in self.0 {
            map.serialize_entry(&frame.to_string(), &b.as_array())?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ValidationError;

    #[test]
    fn minimal_file() {
        let src = br#"{"meta":{"width":20,"height":20,"total_frames":1,"fps":null},
            "tracks":[{"id":0,"label":"ball","confidence":null,"boxes":{"0":[0,0,10,10]}}]}"#;
        let ts = parse_tracks_json(src).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts.tracks()[0].boxes.len(), 1);
        assert_eq!(
            ts.tracks()[0].box_at(0),
            Some(&BoundingBox::new(0, 0, 10, 10).unwrap())
        );
    }

    #[test]
    fn duplicate_track_id() {
        let src = br#"{"meta":{"width":20,"height":20,"total_frames":2},
            "tracks":[{"id":3,"label":"a","boxes":{"0":[0,0,1,1]}},
                      {"id":3,"label":"b","boxes":{"1":[0,0,1,1]}}]}"#;
        let err = parse_tracks_json(src).unwrap_err();
        assert!(err.to_string().contains("duplicate track_id"), "{err}");
        assert!(matches!(
            err,
            Error::Validation(ValidationError {
                track_id: Some(3),
                ..
            })
        ));
    }

    #[test]
    fn degenerate_box() {
        let src = br#"{"meta":{"width":20,"height":20,"total_frames":2},
            "tracks":[{"id":1,"label":"a","boxes":{"0":[4,0,4,1]}}]}"#;
        let err = parse_tracks_json(src).unwrap_err();
        assert!(err.to_string().contains("degenerate box"), "{err}");
    }

    #[test]
    fn negative_coordinate_names_field_and_track() {
        let src = br#"{"meta":{"width":20,"height":20,"total_frames":2},
            "tracks":[{"id":5,"label":"a","boxes":{"1":[0,-2,4,4]}}]}"#;
        match parse_tracks_json(src).unwrap_err() {
            Error::Validation(v) => {
                assert_eq!(v.track_id, Some(5));
                assert!(v.field.contains("y1"), "{}", v.field);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn missing_field_names_field_and_track() {
        let src = br#"{"meta":{"width":20,"height":20,"total_frames":2},
            "tracks":[{"id":5,"boxes":{"1":[0,0,4,4]}}]}"#;
        match parse_tracks_json(src).unwrap_err() {
            Error::Validation(v) => {
                assert_eq!(v.track_id, Some(5));
                assert_eq!(v.field, "label");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn syntax_error_reports_byte_offset() {
        let src = b"{\"meta\":\n  {\"width\": 2,, }";
        match parse_tracks_json(src).unwrap_err() {
            Error::Json { offset, .. } => assert_eq!(src[offset - 1], b','),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn canonical_form_orders_frames_numerically() {
        let src = br#"{"meta":{"width":20,"height":20,"total_frames":20},
            "tracks":[{"id":1,"label":"a","boxes":{"10":[0,0,1,1],"2":[0,0,1,1]}}]}"#;
        let out = tracks_to_json(&parse_tracks_json(src).unwrap());
        assert!(out.find("\"2\"").unwrap() < out.find("\"10\"").unwrap());
        assert_eq!(
            parse_tracks_json(out.as_bytes()).unwrap(),
            parse_tracks_json(src).unwrap()
        );
    }
}
