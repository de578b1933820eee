use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Frame geometry and length of the source video.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VideoMeta {
    pub width: u32,
    pub height: u32,
    pub total_frames: u32,
    /// Informational only; nothing in the pipeline depends on it.
    pub fps: Option<f64>,
}

impl VideoMeta {
    pub fn new(width: u32, height: u32, total_frames: u32) -> Self {
        VideoMeta {
            width,
            height,
            total_frames,
            fps: None,
        }
    }
}

/// Axis-aligned box in pixel coordinates, half-open: it covers columns
/// `x1..x2` and rows `y1..y2`.
///
/// Coordinates may lie outside the frame (tracker output overshoots);
/// see [`BoundingBox::clip`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundingBox {
    x1: i32,
    y1: i32,
    x2: i32,
    y2: i32,
}

impl BoundingBox {
    pub fn new(x1: i32, y1: i32, x2: i32, y2: i32) -> Result<Self> {
        if x1 >= x2 || y1 >= y2 {
            return Err(Error::DegenerateBox {
                x1: x1.into(),
                y1: y1.into(),
                x2: x2.into(),
                y2: y2.into(),
            });
        }
        Ok(BoundingBox { x1, y1, x2, y2 })
    }

    /// Builds a box from a top-left corner and a positive extent.
    pub fn from_xywh(x: i32, y: i32, w: i32, h: i32) -> Result<Self> {
        let x2 = x.checked_add(w);
        let y2 = y.checked_add(h);
        match (x2, y2) {
            (Some(x2), Some(y2)) => BoundingBox::new(x, y, x2, y2),
            _ => Err(Error::DegenerateBox {
                x1: x.into(),
                y1: y.into(),
                x2: i64::from(x) + i64::from(w),
                y2: i64::from(y) + i64::from(h),
            }),
        }
    }

    pub fn x1(&self) -> i32 {
        self.x1
    }
    pub fn y1(&self) -> i32 {
        self.y1
    }
    pub fn x2(&self) -> i32 {
        self.x2
    }
    pub fn y2(&self) -> i32 {
        self.y2
    }

    pub fn width(&self) -> i64 {
        i64::from(self.x2) - i64::from(self.x1)
    }

    pub fn height(&self) -> i64 {
        i64::from(self.y2) - i64::from(self.y1)
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    pub fn as_array(&self) -> [i32; 4] {
        [self.x1, self.y1, self.x2, self.y2]
    }

    /// Center doubled, so that half-pixel centers stay exact.
    pub fn center(&self) -> Center {
        Center {
            twice_x: i64::from(self.x1) + i64::from(self.x2),
            twice_y: i64::from(self.y1) + i64::from(self.y2),
        }
    }

    pub fn intersection(&self, other: &BoundingBox) -> Option<BoundingBox> {
        let x1 = self.x1.max(other.x1);
        let y1 = self.y1.max(other.y1);
        let x2 = self.x2.min(other.x2);
        let y2 = self.y2.min(other.y2);
        (x1 < x2 && y1 < y2).then_some(BoundingBox { x1, y1, x2, y2 })
    }

    pub fn contains_pixel(&self, x: i64, y: i64) -> bool {
        x >= i64::from(self.x1)
            && x < i64::from(self.x2)
            && y >= i64::from(self.y1)
            && y < i64::from(self.y2)
    }

    /// True when the box lies entirely inside a `width`×`height` frame.
    pub fn within(&self, width: u32, height: u32) -> bool {
        self.x1 >= 0
            && self.y1 >= 0
            && i64::from(self.x2) <= i64::from(width)
            && i64::from(self.y2) <= i64::from(height)
    }

    /// Clips to frame bounds; `None` when nothing of the box is on screen.
    pub fn clip(&self, width: u32, height: u32) -> Option<BoundingBox> {
        let frame = BoundingBox {
            x1: 0,
            y1: 0,
            x2: i32::try_from(width).unwrap_or(i32::MAX),
            y2: i32::try_from(height).unwrap_or(i32::MAX),
        };
        self.intersection(&frame)
    }
}

/// A point with coordinates stored at twice their value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Center {
    pub twice_x: i64,
    pub twice_y: i64,
}

impl Center {
    pub fn x(&self) -> f64 {
        self.twice_x as f64 / 2.0
    }

    pub fn y(&self) -> f64 {
        self.twice_y as f64 / 2.0
    }

    /// Nearest pixel, halves rounded up.
    pub fn round_half_up(&self) -> (i64, i64) {
        (
            (self.twice_x + 1).div_euclid(2),
            (self.twice_y + 1).div_euclid(2),
        )
    }
}

/// One object's identity, class label and per-frame boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub track_id: u64,
    pub label: String,
    /// Frame index (0-based) to box; a missing frame means not visible.
    pub boxes: BTreeMap<u32, BoundingBox>,
    pub confidence: Option<f64>,
}

impl Track {
    pub fn new(track_id: u64, label: impl Into<String>) -> Self {
        Track {
            track_id,
            label: label.into(),
            boxes: BTreeMap::new(),
            confidence: None,
        }
    }

    pub fn with_box(mut self, frame: u32, bbox: BoundingBox) -> Self {
        self.boxes.insert(frame, bbox);
        self
    }

    pub fn first_frame(&self) -> Option<u32> {
        self.boxes.keys().next().copied()
    }

    pub fn box_at(&self, frame: u32) -> Option<&BoundingBox> {
        self.boxes.get(&frame)
    }
}

/// All tracks of one video, in first-appearance order (ties by id).
#[derive(Debug, Clone, PartialEq)]
pub struct TrackSet {
    pub meta: VideoMeta,
    tracks: Vec<Track>,
}

impl TrackSet {
    /// Normalizes track order; does not otherwise validate. Run
    /// [`validate_tracks`](super::validate_tracks) for diagnostics.
    pub fn new(meta: VideoMeta, mut tracks: Vec<Track>) -> Self {
        // Empty tracks sort last.
        tracks.sort_by_key(|t| (t.first_frame().unwrap_or(u32::MAX), t.track_id));
        TrackSet { meta, tracks }
    }

    pub fn empty(meta: VideoMeta) -> Self {
        TrackSet {
            meta,
            tracks: Vec::new(),
        }
    }

    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    pub fn len(&self) -> usize {
        self.tracks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.is_empty()
    }

    pub fn get(&self, track_id: u64) -> Option<&Track> {
        self.tracks.iter().find(|t| t.track_id == track_id)
    }

    /// Number of tracks with a box at `frame`.
    pub fn visible_at(&self, frame: u32) -> usize {
        self.tracks
            .iter()
            .filter(|t| t.boxes.contains_key(&frame))
            .count()
    }

    pub fn into_tracks(self) -> Vec<Track> {
        self.tracks
    }

    /// Clips every box to the frame, dropping boxes that fall fully outside
    /// and tracks left without any box.
    pub fn clipped(&self) -> TrackSet {
        let (w, h) = (self.meta.width, self.meta.height);
        let tracks = self
            .tracks
            .iter()
            .map(|t| Track {
                boxes: t
                    .boxes
                    .iter()
                    .filter_map(|(&f, b)| b.clip(w, h).map(|c| (f, c)))
                    .collect(),
                ..t.clone()
            })
            .filter(|t| !t.boxes.is_empty())
            .collect();
        TrackSet::new(self.meta, tracks)
    }
}

/// Binary per-frame segmentation, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: u32, height: u32) -> Self {
        Mask {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width as usize * height as usize {
            return Err(Error::DimensionMismatch {
                expected: (width, height),
                actual: (bits.len() as u32, 1),
            });
        }
        Ok(Mask {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.bits[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}
