//! MOTChallenge-style CSV: `frame,id,x,y,w,h,conf,...`, 1-based frames.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::types::{BoundingBox, Track, TrackSet, VideoMeta};
use crate::error::{Error, Result};

/// MOT rows carry no class, so every track gets this label.
pub const MOT_DEFAULT_LABEL: &str = "object";

struct Row {
    frame: u32,
    conf: Option<f64>,
    bbox: BoundingBox,
}

pub fn parse_tracks_mot(bytes: &[u8], meta: VideoMeta) -> Result<TrackSet> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        Error::Csv {
            line,
            message: "invalid UTF-8".to_owned(),
        }
    })?;

    let mut by_id: BTreeMap<u64, Vec<Row>> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() < 6 {
            return Err(Error::Csv {
                line,
                message: format!("expected at least 6 fields, found {}", fields.len()),
            });
        }

        let frame_1 = integral(fields[0], line, "frame")?;
        let id = integral(fields[1], line, "id")?;
        let x = integral(fields[2], line, "x")?;
        let y = integral(fields[3], line, "y")?;
        let w = integral(fields[4], line, "w")?;
        let h = integral(fields[5], line, "h")?;
        let conf = match fields.get(6) {
            Some(s) if !s.is_empty() => {
                let c = number(s, line, "conf")?;
                // -1 and other sentinels mean "no score".
                (0.0..=1.0).contains(&c).then_some(c)
            }
            _ => None,
        };

        let id = u64::try_from(id).map_err(|_| {
            Error::validation(None, format!("line {line}: id"), "negative track id")
        })?;
        if frame_1 < 1 || frame_1 > i64::from(meta.total_frames) {
            return Err(Error::validation(
                Some(id),
                format!("line {line}: frame"),
                format!("frame {frame_1} outside 1..={}", meta.total_frames),
            ));
        }
        let coord = |v: i64, name: &str| {
            i32::try_from(v).map_err(|_| Error::Csv {
                line,
                message: format!("{name} out of range"),
            })
        };
        let bbox = BoundingBox::from_xywh(
            coord(x, "x")?,
            coord(y, "y")?,
            coord(w, "w")?,
            coord(h, "h")?,
        )
        .map_err(|_| Error::validation(Some(id), format!("line {line}"), "degenerate box"))?;

        by_id.entry(id).or_default().push(Row {
            frame: (frame_1 - 1) as u32,
            conf,
            bbox,
        });
    }

    let mut tracks = Vec::with_capacity(by_id.len());
    for (id, mut rows) in by_id {
        rows.sort_by_key(|r| r.frame);
        let mut track = Track::new(id, MOT_DEFAULT_LABEL);
        track.confidence = rows[0].conf;
        for r in rows {
            if track.boxes.insert(r.frame, r.bbox).is_some() {
                return Err(Error::validation(
                    Some(id),
                    "frame",
                    format!("duplicate row for frame {}", r.frame + 1),
                ));
            }
        }
        tracks.push(track);
    }
    Ok(TrackSet::new(meta, tracks))
}

/// Writes MOT rows ordered by frame then id. Missing scores are written as -1.
pub fn tracks_to_mot(ts: &TrackSet) -> String {
    let mut rows: Vec<(u32, u64, BoundingBox, Option<f64>)> = ts
        .tracks()
        .iter()
        .flat_map(|t| {
            t.boxes
                .iter()
                .map(move |(&f, &b)| (f, t.track_id, b, t.confidence))
        })
        .collect();
    rows.sort_by_key(|r| (r.0, r.1));
    let mut out = String::new();
    for (frame, id, b, conf) in rows {
        let conf = conf.unwrap_or(-1.0);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{conf},-1,-1,-1",
            frame + 1,
            id,
            b.x1(),
            b.y1(),
            b.width(),
            b.height()
        );
    }
    out
}

fn number(s: &str, line: usize, name: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Csv {
            line,
            message: format!("{name}: not a number: {s:?}"),
        })
}

/// Integers, also accepting the `12.0` spelling some trackers emit.
fn integral(s: &str, line: usize, name: &str) -> Result<i64> {
    if let Ok(v) = s.parse::<i64>() {
        return Ok(v);
    }
    let v = number(s, line, name)?;
    if v.fract() != 0.0 || v.abs() > i32::MAX as f64 {
        return Err(Error::Csv {
            line,
            message: format!("{name}: expected an integer, found {s:?}"),
        });
    }
    Ok(v as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> VideoMeta {
        VideoMeta::new(640, 480, 100)
    }

    #[test]
    fn single_row() {
        let ts = parse_tracks_mot(b"1,7,10,20,30,40,0.9\n", meta()).unwrap();
        assert_eq!(ts.len(), 1);
        let t = &ts.tracks()[0];
        assert_eq!(t.track_id, 7);
        assert_eq!(t.label, MOT_DEFAULT_LABEL);
        assert_eq!(t.confidence, Some(0.9));
        assert_eq!(
            t.box_at(0),
            Some(&BoundingBox::new(10, 20, 40, 60).unwrap())
        );
    }

    #[test]
    fn empty_file() {
        assert!(parse_tracks_mot(b"", meta()).unwrap().is_empty());
        assert!(parse_tracks_mot(b"\n\n", meta()).unwrap().is_empty());
    }

    #[test]
    fn rows_group_by_id() {
        let ts = parse_tracks_mot(b"3,2,0,0,5,5,1\n1,2,1,1,5,5,1\n", meta()).unwrap();
        assert_eq!(ts.len(), 1);
        let frames: Vec<u32> = ts.tracks()[0].boxes.keys().copied().collect();
        assert_eq!(frames, vec![0, 2]);
        assert!(ts.tracks()[0].box_at(1).is_none());
    }

    #[test]
    fn non_numeric_field_reports_line() {
        match parse_tracks_mot(b"1,1,0,0,5,5,1\n2,1,zero,0,5,5,1\n", meta()).unwrap_err() {
            Error::Csv { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn frame_past_end_is_rejected() {
        let err = parse_tracks_mot(b"101,1,0,0,5,5,1\n", meta()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn float_spelling_and_sentinel_conf() {
        let ts = parse_tracks_mot(b"1,4,-3.0,2,10.0,10,-1,-1,-1,-1\n", meta()).unwrap();
        let t = &ts.tracks()[0];
        assert_eq!(t.confidence, None);
        assert_eq!(t.box_at(0), Some(&BoundingBox::new(-3, 2, 7, 12).unwrap()));
        assert!(parse_tracks_mot(b"1,4,0.5,2,10,10\n", meta()).is_err());
    }
}
