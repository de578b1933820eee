//! Keyframe sampling and trajectory-trail geometry.
//!
//! Keyframes sit at `k * L` for `k = 0..T` with `L = floor(T_video / T)`.
//! The trail drawn on keyframe `t` covers original frames `t-L .. t-1`, so
//! the trails of consecutive keyframes tile the timeline with no gap and no
//! overlap.

use crate::error::{Error, Result};
use crate::trackmodel::{Center, Track, VideoMeta};

/// Default number of keyframes per clip.
pub const DEFAULT_NUM_SAMPLES: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePlan {
    pub total_frames: u32,
    pub num_samples: u32,
    pub interval: u32,
    pub indices: Vec<u32>,
}

/// Uniform keyframe plan anchored at frame 0.
pub fn make_sample_plan(meta: &VideoMeta, num_samples: u32) -> Result<SamplePlan> {
    if num_samples == 0 || num_samples > meta.total_frames {
        return Err(Error::TooFewFrames {
            total_frames: meta.total_frames,
            num_samples,
        });
    }
    let interval = adaptive_trail_length(meta, num_samples);
    let indices = (0..num_samples).map(|k| k * interval).collect();
    Ok(SamplePlan {
        total_frames: meta.total_frames,
        num_samples,
        interval,
        indices,
    })
}

/// `max(1, floor(total_frames / num_samples))`.
pub fn adaptive_trail_length(meta: &VideoMeta, num_samples: u32) -> u32 {
    (meta.total_frames / num_samples.max(1)).max(1)
}

/// How many past frames a trail spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrailMode {
    /// Trail length equals the plan's sampling interval.
    #[default]
    Adaptive,
    Fixed(u32),
}

impl TrailMode {
    pub fn length(&self, plan: &SamplePlan) -> u32 {
        match *self {
            TrailMode::Adaptive => plan.interval,
            TrailMode::Fixed(l) => l.max(1),
        }
    }
}

impl std::str::FromStr for TrailMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "adaptive" {
            return Ok(TrailMode::Adaptive);
        }
        match s.strip_prefix("fixed:").map(str::parse::<u32>) {
            Some(Ok(l)) if l >= 1 => Ok(TrailMode::Fixed(l)),
            _ => Err(format!(
                "expected `adaptive` or `fixed:<L>` with L >= 1, got {s:?}"
            )),
        }
    }
}

/// Box centers of one track over the frames preceding a keyframe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    pub track_id: u64,
    pub frame: u32,
    /// `(source frame, center)` in increasing frame order.
    pub points: Vec<(u32, Center)>,
}

impl Trail {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centers(&self) -> impl Iterator<Item = Center> + '_ {
        self.points.iter().map(|&(_, c)| c)
    }
}

/// Half-open range of original frames a trail at `frame` reads.
pub fn trail_window(frame: u32, length: u32) -> std::ops::Range<u32> {
    frame.saturating_sub(length.max(1))..frame
}

/// Centers of `track` at frames `max(0, t-L) .. t-1`, skipping frames where
/// the track has no box.
pub fn build_trail(track: &Track, frame: u32, length: u32) -> Trail {
    let points = track
        .boxes
        .range(trail_window(frame, length))
        .map(|(&f, b)| (f, b.center()))
        .collect();
    Trail {
        track_id: track.track_id,
        frame,
        points,
    }
}
