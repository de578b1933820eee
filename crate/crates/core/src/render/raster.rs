//! Integer-only stroke rasterization. No anti-aliasing; everything is
//! clipped to the surface.

use super::image::{FrameImage, Rgb};
use crate::trackmodel::{BoundingBox, Mask};

/// Anything strokes can be painted onto.
pub trait Canvas {
    fn dimensions(&self) -> (u32, u32);
    /// Paint an in-bounds pixel.
    fn paint(&mut self, x: u32, y: u32, color: Rgb);

    fn paint_clipped(&mut self, x: i64, y: i64, color: Rgb) {
        let (w, h) = self.dimensions();
        if x >= 0 && y >= 0 && x < i64::from(w) && y < i64::from(h) {
            self.paint(x as u32, y as u32, color);
        }
    }
}

impl Canvas for FrameImage {
    fn dimensions(&self) -> (u32, u32) {
        FrameImage::dimensions(self)
    }

    fn paint(&mut self, x: u32, y: u32, color: Rgb) {
        self.set(x, y, color);
    }
}

/// Records which pixels a stroke touches, ignoring color.
impl Canvas for Mask {
    fn dimensions(&self) -> (u32, u32) {
        (self.width(), self.height())
    }

    fn paint(&mut self, x: u32, y: u32, _color: Rgb) {
        self.set(x, y, true);
    }
}

/// Pixels of the segment from `a` to `b`, both endpoints included.
///
/// Midpoint algorithm stepping along the major axis (x when `|dx| >= |dy|`),
/// always from the endpoint with the smaller major coordinate. When the
/// ideal line passes exactly between two pixels the one closer to that
/// start endpoint wins, so `line_pixels(a, b)` and `line_pixels(b, a)` are
/// the same set.
pub fn line_pixels(a: (i64, i64), b: (i64, i64)) -> Vec<(i64, i64)> {
    let x_major = (b.0 - a.0).abs() >= (b.1 - a.1).abs();
    // Work in (major, minor) coordinates.
    let (p, q) = if x_major {
        (a, b)
    } else {
        ((a.1, a.0), (b.1, b.0))
    };
    let (p, q) = if p.0 <= q.0 { (p, q) } else { (q, p) };

    let d_major = q.0 - p.0;
    let d_minor = (q.1 - p.1).abs();
    let step = if q.1 >= p.1 { 1 } else { -1 };

    let mut out = Vec::with_capacity(d_major as usize + 1);
    let mut minor = p.1;
    let mut d = 2 * d_minor - d_major;
    for major in p.0..=q.0 {
        out.push(if x_major {
            (major, minor)
        } else {
            (minor, major)
        });
        if d > 0 {
            minor += step;
            d -= 2 * d_major;
        }
        d += 2 * d_minor;
    }
    out
}

/// Top-left corner of the `width`×`width` pen square centered on a pixel.
/// Even widths extend one more pixel up and left than down and right.
pub fn pen_origin(x: i64, y: i64, width: u32) -> (i64, i64) {
    let half = i64::from(width / 2);
    (x - half, y - half)
}

pub fn stamp<C: Canvas + ?Sized>(canvas: &mut C, x: i64, y: i64, width: u32, color: Rgb) {
    let (ox, oy) = pen_origin(x, y, width);
    let w = i64::from(width.max(1));
    for py in oy..oy + w {
        for px in ox..ox + w {
            canvas.paint_clipped(px, py, color);
        }
    }
}

pub fn draw_line<C: Canvas + ?Sized>(
    canvas: &mut C,
    a: (i64, i64),
    b: (i64, i64),
    color: Rgb,
    width: u32,
) {
    for (x, y) in line_pixels(a, b) {
        stamp(canvas, x, y, width, color);
    }
}

/// Connected line segments through `points`. A single point is drawn as one
/// pen-sized dot; an empty list draws nothing.
pub fn draw_polyline<C: Canvas + ?Sized>(
    canvas: &mut C,
    points: &[(i64, i64)],
    color: Rgb,
    width: u32,
) {
    match points {
        [] => {}
        [p] => stamp(canvas, p.0, p.1, width, color),
        _ => {
            for seg in points.windows(2) {
                draw_line(canvas, seg[0], seg[1], color, width);
            }
        }
    }
}

/// Rectangle outline whose stroke grows inward from the box edge: a pixel
/// inside the box is painted when it lies within `width` pixels of any side.
pub fn draw_rect_outline<C: Canvas + ?Sized>(
    canvas: &mut C,
    bbox: &BoundingBox,
    color: Rgb,
    width: u32,
) {
    let (cw, ch) = canvas.dimensions();
    let Some(visible) = bbox.clip(cw, ch) else {
        return;
    };
    let w = i64::from(width.max(1));
    let (x1, y1, x2, y2) = (
        i64::from(bbox.x1()),
        i64::from(bbox.y1()),
        i64::from(bbox.x2()),
        i64::from(bbox.y2()),
    );
    for y in i64::from(visible.y1())..i64::from(visible.y2()) {
        let full_row = y < y1 + w || y >= y2 - w;
        for x in i64::from(visible.x1())..i64::from(visible.x2()) {
            if full_row || x < x1 + w || x >= x2 - w {
                canvas.paint(x as u32, y as u32, color);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BLACK: Rgb = Rgb([0, 0, 0]);
    const RED: Rgb = Rgb([255, 0, 0]);

    fn painted(img: &FrameImage, c: Rgb) -> Vec<(u32, u32)> {
        let mut v = Vec::new();
        for y in 0..img.height() {
            for x in 0..img.width() {
                if img.get(x, y) == c {
                    v.push((x, y));
                }
            }
        }
        v
    }

    #[test]
    fn diagonal_line() {
        assert_eq!(
            line_pixels((0, 0), (3, 3)),
            vec![(0, 0), (1, 1), (2, 2), (3, 3)]
        );
    }

    #[test]
    fn line_is_order_independent() {
        let mut a = line_pixels((1, 7), (12, 2));
        let mut b = line_pixels((12, 2), (1, 7));
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn single_point_polyline_is_a_dot() {
        let mut img = FrameImage::new(10, 10, BLACK);
        draw_polyline(&mut img, &[(5, 5)], RED, 3);
        let got = painted(&img, RED);
        assert_eq!(got.len(), 9);
        assert!(got.contains(&(4, 4)) && got.contains(&(6, 6)));

        let mut img = FrameImage::new(10, 10, BLACK);
        draw_polyline(&mut img, &[(5, 5)], RED, 2);
        assert_eq!(painted(&img, RED), vec![(4, 4), (5, 4), (4, 5), (5, 5)]);
    }

    #[test]
    fn rect_outline_width_one() {
        let mut img = FrameImage::new(100, 100, BLACK);
        draw_rect_outline(&mut img, &BoundingBox::new(10, 10, 20, 20).unwrap(), RED, 1);
        let got = painted(&img, RED);
        assert_eq!(got.len(), 36);
        assert!(got
            .iter()
            .all(|&(x, y)| x == 10 || x == 19 || y == 10 || y == 19));
    }

    #[test]
    fn rect_outside_frame_is_noop() {
        let mut img = FrameImage::new(10, 10, BLACK);
        let before = img.clone();
        draw_rect_outline(&mut img, &BoundingBox::new(20, 20, 30, 30).unwrap(), RED, 3);
        draw_rect_outline(&mut img, &BoundingBox::new(-9, -9, -1, -1).unwrap(), RED, 3);
        assert_eq!(img, before);
    }

    #[test]
    fn rect_wider_than_box_fills_it() {
        let mut img = FrameImage::new(10, 10, BLACK);
        draw_rect_outline(&mut img, &BoundingBox::new(2, 2, 6, 5).unwrap(), RED, 5);
        assert_eq!(painted(&img, RED).len(), 12);
    }

    #[test]
    fn mask_canvas_tracks_footprint() {
        let mut m = Mask::new(8, 8);
        draw_line(&mut m, (0, 0), (7, 0), RED, 1);
        assert_eq!(m.count(), 8);
    }
}
