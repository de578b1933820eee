use std::collections::BTreeMap;

use super::image::{FrameImage, Rgb};
use super::palette::{Palette, PaletteColor};
use super::raster::{draw_polyline, draw_rect_outline, Canvas};
use crate::error::{Error, Result};
use crate::temporal::{build_trail, SamplePlan, Trail, TrailMode};
use crate::trackmodel::{BoundingBox, Diagnostic, Mask, Severity, TrackSet};

/// Track id to palette slot, plus the palette it indexes.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorAssignment {
    palette: Palette,
    slots: BTreeMap<u64, usize>,
    pub warnings: Vec<Diagnostic>,
}

impl ColorAssignment {
    /// Explicit assignment; every slot must index into `palette`.
    pub fn from_slots(palette: Palette, slots: BTreeMap<u64, usize>) -> Result<Self> {
        if let Some((&id, &slot)) = slots.iter().find(|(_, &s)| s >= palette.len()) {
            return Err(Error::validation(
                Some(id),
                "color",
                format!("palette slot {slot} out of range"),
            ));
        }
        Ok(ColorAssignment {
            palette,
            slots,
            warnings: Vec::new(),
        })
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn slot(&self, track_id: u64) -> Option<usize> {
        self.slots.get(&track_id).copied()
    }

    pub fn color(&self, track_id: u64) -> Option<&PaletteColor> {
        self.slot(track_id).map(|s| self.palette.get(s))
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// Track at position `j` gets palette slot `j mod K`. Running past the
/// palette reuses colors and records a warning.
pub fn assign_colors(ts: &TrackSet, palette: &Palette) -> ColorAssignment {
    let k = palette.len().max(1);
    let slots = ts
        .tracks()
        .iter()
        .enumerate()
        .map(|(j, t)| (t.track_id, j % k))
        .collect();
    let mut warnings = Vec::new();
    if ts.len() > k {
        warnings.push(Diagnostic {
            severity: Severity::Warning,
            track_id: ts.tracks().get(k).map(|t| t.track_id),
            frame: None,
            message: format!(
                "{} tracks exceed the {k}-color palette; colors are reused",
                ts.len()
            ),
        });
    }
    ColorAssignment {
        palette: palette.clone(),
        slots,
        warnings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderConfig {
    pub box_width: u32,
    pub trail_width: u32,
    pub trail_mode: TrailMode,
    /// Join the last trail point to the current box center.
    pub connect_trail_to_box: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            box_width: 3,
            trail_width: 2,
            trail_mode: TrailMode::Adaptive,
            connect_trail_to_box: true,
        }
    }
}

impl RenderConfig {
    pub fn check(&self) -> Result<()> {
        if self.box_width == 0 || self.trail_width == 0 {
            return Err(Error::validation(
                None,
                "render",
                "line widths must be at least 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayItem {
    pub track_id: u64,
    pub color: Rgb,
    pub bbox: BoundingBox,
    pub trail: Trail,
}

impl OverlayItem {
    /// Pixel vertices of the trail polyline as drawn.
    pub fn trail_vertices(&self, connect_to_box: bool) -> Vec<(i64, i64)> {
        let mut pts: Vec<(i64, i64)> = self.trail.centers().map(|c| c.round_half_up()).collect();
        if connect_to_box && !pts.is_empty() {
            pts.push(self.bbox.center().round_half_up());
        }
        pts
    }
}

/// Everything drawn on one keyframe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlaySet {
    pub frame: u32,
    pub frame_size: (u32, u32),
    pub items: Vec<OverlayItem>,
}

/// One overlay set per keyframe. Tracks without a box at the keyframe are
/// skipped entirely, trail included.
pub fn build_overlays(
    ts: &TrackSet,
    plan: &SamplePlan,
    assignment: &ColorAssignment,
    cfg: &RenderConfig,
) -> Vec<OverlaySet> {
    let length = cfg.trail_mode.length(plan);
    let frame_size = (ts.meta.width, ts.meta.height);
    plan.indices
        .iter()
        .map(|&frame| {
            let items = ts
                .tracks()
                .iter()
                .filter_map(|t| {
                    let bbox = *t.box_at(frame)?;
                    let color = assignment.color(t.track_id)?.rgb;
                    Some(OverlayItem {
                        track_id: t.track_id,
                        color,
                        bbox,
                        trail: build_trail(t, frame, length),
                    })
                })
                .collect();
            OverlaySet {
                frame,
                frame_size,
                items,
            }
        })
        .collect()
}

fn draw_overlays<C: Canvas>(canvas: &mut C, overlays: &OverlaySet, cfg: &RenderConfig) {
    // Trails first so no box is hidden under motion history.
    for item in &overlays.items {
        let pts = item.trail_vertices(cfg.connect_trail_to_box);
        draw_polyline(canvas, &pts, item.color, cfg.trail_width);
    }
    for item in &overlays.items {
        draw_rect_outline(canvas, &item.bbox, item.color, cfg.box_width);
    }
}

/// Composites boxes and trails onto a copy of `frame`.
pub fn render_frame(
    frame: &FrameImage,
    overlays: &OverlaySet,
    cfg: &RenderConfig,
) -> Result<FrameImage> {
    if frame.dimensions() != overlays.frame_size {
        return Err(Error::DimensionMismatch {
            expected: overlays.frame_size,
            actual: frame.dimensions(),
        });
    }
    let mut out = frame.clone();
    draw_overlays(&mut out, overlays, cfg);
    Ok(out)
}

/// Pixels any stroke of `overlays` can touch.
pub fn overlay_footprint(overlays: &OverlaySet, cfg: &RenderConfig) -> Mask {
    let (w, h) = overlays.frame_size;
    let mut mask = Mask::new(w, h);
    draw_overlays(&mut mask, overlays, cfg);
    mask
}
