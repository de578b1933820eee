//! Reference implementations written independently of the library, used to
//! cross-check it. Shared with the CLI acceptance suite.
#![allow(dead_code)]

use boxprompt::detpost::Detection;
use boxprompt::trackmodel::{BoundingBox, Mask};

/// IoU from explicit edge overlaps.
pub fn iou_oracle(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let ow = (a.x2().min(b.x2()) - a.x1().max(b.x1())).max(0) as i64;
    let oh = (a.y2().min(b.y2()) - a.y1().max(b.y1())).max(0) as i64;
    let inter = ow * oh;
    if inter == 0 {
        return 0.0;
    }
    let area = |r: &BoundingBox| (r.x2() - r.x1()) as i64 * (r.y2() - r.y1()) as i64;
    inter as f64 / (area(a) + area(b) - inter) as f64
}

/// Pool formulation of greedy NMS: repeatedly take the best remaining
/// detection, then strike every remaining same-label detection that
/// overlaps it by more than `threshold`.
pub fn nms_oracle(dets: &[Detection], threshold: f64) -> Vec<Detection> {
    let beats = |i: usize, j: usize| {
        let (a, b) = (&dets[i], &dets[j]);
        a.confidence > b.confidence || (a.confidence == b.confidence && i < j)
    };
    let mut pool: Vec<usize> = (0..dets.len()).collect();
    let mut out = Vec::new();
    while !pool.is_empty() {
        let best = *pool
            .iter()
            .find(|&&i| pool.iter().all(|&j| j == i || beats(i, j)))
            .expect("strict total order has a maximum");
        out.push(dets[best].clone());
        pool.retain(|&j| {
            j != best
                && !(dets[j].label == dets[best].label
                    && iou_oracle(&dets[j].bbox, &dets[best].bbox) > threshold)
        });
    }
    out
}

/// Exhaustive min/max scan; `None` for an empty mask.
pub fn mask_extent_oracle(mask: &Mask) -> Option<(i32, i32, i32, i32)> {
    let mut ext: Option<(u32, u32, u32, u32)> = None;
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                ext = Some(match ext {
                    None => (x, y, x, y),
                    Some((a, b, c, d)) => (a.min(x), b.min(y), c.max(x), d.max(y)),
                });
            }
        }
    }
    ext.map(|(a, b, c, d)| (a as i32, b as i32, c as i32 + 1, d as i32 + 1))
}

/// Whether some set bit lies in column `x` (or row `y` when `row`).
pub fn line_has_bit(mask: &Mask, index: u32, row: bool) -> bool {
    if row {
        (0..mask.width()).any(|x| mask.get(x, index))
    } else {
        (0..mask.height()).any(|y| mask.get(index, y))
    }
}

/// Digital line by nearest-pixel choice: at each step `k` along the major
/// axis (x on ties), take the minor offset closest to the exact line,
/// preferring the smaller offset on exact halves. Walks from the endpoint
/// with the smaller major coordinate.
pub fn line_oracle(a: (i64, i64), b: (i64, i64)) -> Vec<(i64, i64)> {
    let x_major = (b.0 - a.0).abs() >= (b.1 - a.1).abs();
    let swap = |p: (i64, i64)| if x_major { p } else { (p.1, p.0) };
    let (mut s, mut e) = (swap(a), swap(b));
    if s.0 > e.0 {
        std::mem::swap(&mut s, &mut e);
    }
    let dmaj = e.0 - s.0;
    let dmin = e.1 - s.1;
    (0..=dmaj)
        .map(|k| {
            let m = (0..=dmin.abs())
                .min_by_key(|&m| ((2 * dmaj * m - 2 * k * dmin.abs()).abs(), m))
                .unwrap();
            swap((s.0 + k, s.1 + m * dmin.signum()))
        })
        .collect()
}

/// Detections at `frame` whose IoU with every box present at `frame` is at
/// most `dedup_iou`.
pub fn merge_oracle(
    existing: &[BoundingBox],
    dets: &[Detection],
    dedup_iou: f64,
) -> Vec<Detection> {
    let mut out = Vec::new();
    for d in dets {
        let mut dup = false;
        for b in existing {
            if iou_oracle(b, &d.bbox) > dedup_iou {
                dup = true;
            }
        }
        if !dup {
            out.push(d.clone());
        }
    }
    out
}

/// Counts how often each frame in `0..total` is covered by `windows`.
pub fn coverage(windows: &[std::ops::Range<u32>], total: u32) -> Vec<u32> {
    let mut c = vec![0; total as usize];
    for w in windows {
        for f in w.clone() {
            c[f as usize] += 1;
        }
    }
    c
}
