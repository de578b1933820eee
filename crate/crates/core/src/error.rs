use std::fmt;

/// Errors produced while ingesting, validating or compiling annotations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },

    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("{0}")]
    Validation(ValidationError),

    #[error("degenerate box [{x1} {y1} {x2} {y2}]")]
    DegenerateBox { x1: i64, y1: i64, x2: i64, y2: i64 },

    #[error("too few frames: {num_samples} samples requested from {total_frames} frames")]
    TooFewFrames { total_frames: u32, num_samples: u32 },

    #[error("empty mask")]
    EmptyMask,

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (u32, u32),
        actual: (u32, u32),
    },

    #[error("empty question")]
    EmptyQuestion,

    #[error("image decode: {0}")]
    Image(String),

    #[error("invalid scene: {0}")]
    Scene(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A schema or invariant violation, located by field and (when known) track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub track_id: Option<u64>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.track_id {
            Some(id) => write!(f, "track {id}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl Error {
    pub(crate) fn validation(
        track_id: Option<u64>,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Validation(ValidationError {
            track_id,
            field: field.into(),
            message: message.into(),
        })
    }
}
