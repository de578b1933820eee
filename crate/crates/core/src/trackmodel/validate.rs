use std::collections::HashSet;
use std::fmt;

use super::types::TrackSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

/// One finding from [`validate_tracks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub track_id: Option<u64>,
    pub frame: Option<u32>,
    pub message: String,
}

impl Diagnostic {
    fn error(track_id: Option<u64>, frame: Option<u32>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            track_id,
            frame,
            message: message.into(),
        }
    }

    fn warning(track_id: Option<u64>, frame: Option<u32>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            track_id,
            frame,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Schema location the diagnostic refers to.
    pub fn field(&self) -> String {
        match (self.track_id, self.frame) {
            (_, Some(f)) => format!("boxes[\"{f}\"]"),
            (Some(_), None) => "track".to_owned(),
            (None, None) => "meta".to_owned(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}")?;
        if let Some(id) = self.track_id {
            write!(f, ": track {id}")?;
        }
        if let Some(frame) = self.frame {
            write!(f, ": frame {frame}")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Checks every invariant of the track model. Boxes that overshoot the
/// frame but still intersect it are warnings (they get clipped); every
/// other violation is an error.
pub fn validate_tracks(ts: &TrackSet) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let meta = &ts.meta;
    for (name, value) in [
        ("width", meta.width),
        ("height", meta.height),
        ("total_frames", meta.total_frames),
    ] {
        if value == 0 {
            out.push(Diagnostic::error(
                None,
                None,
                format!("meta.{name} must be at least 1"),
            ));
        }
    }

    let mut seen = HashSet::new();
    for track in ts.tracks() {
        let id = Some(track.track_id);
        if !seen.insert(track.track_id) {
            out.push(Diagnostic::error(
                id,
                None,
                format!("duplicate track_id {}", track.track_id),
            ));
        }
        if track.boxes.is_empty() {
            out.push(Diagnostic::error(id, None, "track has no frame entries"));
        }
        if let Some(c) = track.confidence {
            if !(0.0..=1.0).contains(&c) {
                out.push(Diagnostic::error(
                    id,
                    None,
                    format!("confidence {c} outside [0, 1]"),
                ));
            }
        }
        for (&frame, bbox) in &track.boxes {
            if frame >= meta.total_frames {
                out.push(Diagnostic::error(
                    id,
                    Some(frame),
                    format!("frame index {frame} >= total_frames {}", meta.total_frames),
                ));
            }
            if !bbox.within(meta.width, meta.height) {
                if bbox.clip(meta.width, meta.height).is_some() {
                    out.push(Diagnostic::warning(
                        id,
                        Some(frame),
                        "clippable out-of-bounds box",
                    ));
                } else {
                    out.push(Diagnostic::error(
                        id,
                        Some(frame),
                        "box entirely outside frame",
                    ));
                }
            }
        }
    }
    out
}
