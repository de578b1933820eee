//! Non-neural post-processing of detector and tracker output: IoU,
//! confidence filtering, class-wise NMS, boxes from masks, and dedup of
//! keyframe detections against existing tracks.

use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::trackmodel::{as_object, decode_box, field, parse_value, BoundingBox, Mask, TrackSet};

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub bbox: BoundingBox,
    pub label: String,
    pub confidence: f64,
    pub frame: u32,
}

impl Serialize for Detection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Detection", 4)?;
        st.serialize_field("frame", &self.frame)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("confidence", &self.confidence)?;
        st.serialize_field("box", &self.bbox.as_array())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostprocessConfig {
    pub confidence_threshold: f64,
    pub nms_iou: f64,
    pub dedup_iou: f64,
}

impl Default for PostprocessConfig {
    fn default() -> Self {
        PostprocessConfig {
            confidence_threshold: 0.3,
            nms_iou: 0.5,
            dedup_iou: 0.5,
        }
    }
}

impl PostprocessConfig {
    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("confidence_threshold", self.confidence_threshold),
            ("nms_iou", self.nms_iou),
            ("dedup_iou", self.dedup_iou),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(None, name, format!("{v} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Intersection over union with half-open pixel areas.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let inter = a.intersection(b).map_or(0, |i| i.area());
    if inter == 0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    inter as f64 / union as f64
}

/// Keeps detections with `confidence >= threshold`, in input order.
pub fn filter_confidence(dets: &[Detection], threshold: f64) -> Vec<Detection> {
    dets.iter()
        .filter(|d| d.confidence >= threshold)
        .cloned()
        .collect()
}

/// Greedy class-wise NMS.
///
/// Detections are ranked by confidence (descending), then input position,
/// then `x1`, then `y1`. A detection survives when its IoU with every
/// already-kept detection of the same label is `<= threshold`. The result
/// is in rank order.
pub fn nms(dets: &[Detection], threshold: f64) -> Vec<Detection> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&dets[i], &dets[j]);
        b.confidence
            .total_cmp(&a.confidence)
            .then(i.cmp(&j))
            .then(a.bbox.x1().cmp(&b.bbox.x1()))
            .then(a.bbox.y1().cmp(&b.bbox.y1()))
    });

    let mut kept: Vec<&Detection> = Vec::new();
    for i in order {
        let d = &dets[i];
        let suppressed = kept
            .iter()
            .any(|k| k.label == d.label && iou(&k.bbox, &d.bbox) > threshold);
        if !suppressed {
            kept.push(d);
        }
    }
    kept.into_iter().cloned().collect()
}

/// Tightest half-open box around the set bits of `mask`.
pub fn box_from_mask(mask: &Mask) -> Result<BoundingBox> {
    let w = mask.width() as usize;
    let mut extent: Option<(usize, usize, usize, usize)> = None;
    for (row, bits) in mask.bits().chunks(w.max(1)).enumerate() {
        let Some(first) = bits.iter().position(|&b| b) else {
            continue;
        };
        let last = bits.iter().rposition(|&b| b).unwrap_or(first);
        extent = Some(match extent {
            None => (first, row, last, row),
            Some((x1, y1, x2, _)) => (x1.min(first), y1, x2.max(last), row),
        });
    }
    let (x1, y1, x2, y2) = extent.ok_or(Error::EmptyMask)?;
    BoundingBox::new(x1 as i32, y1 as i32, x2 as i32 + 1, y2 as i32 + 1)
}

/// Detections at `frame` that do not duplicate an existing track there.
///
/// A detection is a duplicate when its IoU with some track's box at the
/// same frame exceeds `cfg.dedup_iou`; tracks absent at `frame` are not
/// considered. Survivors are the seeds for new tracks, in input order.
pub fn merge_new_detections(
    ts: &TrackSet,
    frame: u32,
    dets: &[Detection],
    cfg: &PostprocessConfig,
) -> Vec<Detection> {
    let existing: Vec<&BoundingBox> = ts.tracks().iter().filter_map(|t| t.box_at(frame)).collect();
    dets.iter()
        .filter(|d| existing.iter().all(|b| iou(b, &d.bbox) <= cfg.dedup_iou))
        .cloned()
        .collect()
}

/// Confidence filter, then NMS, then dedup against `ts`, for one keyframe.
pub fn postprocess_keyframe(
    ts: &TrackSet,
    frame: u32,
    dets: &[Detection],
    cfg: &PostprocessConfig,
) -> Vec<Detection> {
    let at_frame: Vec<Detection> = dets.iter().filter(|d| d.frame == frame).cloned().collect();
    let confident = filter_confidence(&at_frame, cfg.confidence_threshold);
    let kept = nms(&confident, cfg.nms_iou);
    merge_new_detections(ts, frame, &kept, cfg)
}

/// Reads `{"detections": [{"frame":F,"label":"..","confidence":C,"box":[x1,y1,x2,y2]}, ...]}`.
pub fn parse_detections_json(bytes: &[u8]) -> Result<Vec<Detection>> {
    let root = parse_value(bytes)?;
    let root = as_object(&root, None, "$")?;
    let items = match field(root, None, "detections")? {
        Value::Array(items) => items,
        _ => return Err(Error::validation(None, "detections", "expected an array")),
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let name = format!("detections[{i}]");
            let obj = as_object(v, None, &name)?;
            let get = |k: &str| {
                obj.get(k)
                    .ok_or_else(|| Error::validation(None, format!("{name}.{k}"), "missing field"))
            };
            let frame = get("frame")?
                .as_u64()
                .and_then(|f| u32::try_from(f).ok())
                .ok_or_else(|| {
                    Error::validation(None, format!("{name}.frame"), "expected a frame index")
                })?;
            let label = get("label")?
                .as_str()
                .ok_or_else(|| {
                    Error::validation(None, format!("{name}.label"), "expected a string")
                })?
                .to_owned();
            let confidence = get("confidence")?
                .as_f64()
                .filter(|c| (0.0..=1.0).contains(c))
                .ok_or_else(|| {
                    Error::validation(
                        None,
                        format!("{name}.confidence"),
                        "expected a score in [0, 1]",
                    )
                })?;
            let bbox = decode_box(get("box")?, None, &format!("{name}.box"))?;
            Ok(Detection {
                bbox,
                label,
                confidence,
                frame,
            })
        })
        .collect()
}

pub fn detections_to_json(dets: &[Detection]) -> String {
    serde_json::to_string_pretty(&serde_json::json!({ "detections": dets }))
        .expect("detections serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trackmodel::{Track, VideoMeta};
    use proptest::prelude::*;

    fn b(x1: i32, y1: i32, x2: i32, y2: i32) -> BoundingBox {
        BoundingBox::new(x1, y1, x2, y2).unwrap()
    }

    fn det(bbox: BoundingBox, confidence: f64) -> Detection {
        Detection {
            bbox,
            label: "obj".into(),
            confidence,
            frame: 0,
        }
    }

    #[test]
    fn iou_examples() {
        let a = b(0, 0, 10, 10);
        assert_eq!(iou(&a, &a), 1.0);
        assert_eq!(iou(&a, &b(20, 20, 30, 30)), 0.0);
        assert_eq!(iou(&a, &b(5, 0, 15, 10)), 50.0 / 150.0);
        // Touching edges share no pixel under the half-open convention.
        assert_eq!(iou(&a, &b(10, 0, 20, 10)), 0.0);
    }

    #[test]
    fn nms_examples() {
        let single = vec![det(b(0, 0, 4, 4), 0.5)];
        assert_eq!(nms(&single, 0.5), single);

        let pair = vec![det(b(0, 0, 10, 10), 0.8), det(b(0, 0, 10, 10), 0.9)];
        let kept = nms(&pair, 0.5);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].confidence, 0.9);
    }

    #[test]
    fn nms_is_class_wise() {
        let mut other = det(b(0, 0, 10, 10), 0.8);
        other.label = "toy".into();
        let dets = vec![det(b(0, 0, 10, 10), 0.9), other];
        assert_eq!(nms(&dets, 0.5).len(), 2);
    }

    #[test]
    fn nms_ties_prefer_earlier_input() {
        let dets = vec![det(b(5, 0, 15, 10), 0.7), det(b(0, 0, 10, 10), 0.7)];
        let kept = nms(&dets, 0.0);
        assert_eq!(kept, vec![dets[0].clone()]);
    }

    #[test]
    fn confidence_filter_is_inclusive() {
        let dets: Vec<Detection> = [0.2, 0.3, 0.9]
            .iter()
            .map(|&c| det(b(0, 0, 1, 1), c))
            .collect();
        let kept = filter_confidence(&dets, 0.3);
        assert_eq!(
            kept.iter().map(|d| d.confidence).collect::<Vec<_>>(),
            vec![0.3, 0.9]
        );
        assert!(filter_confidence(&[], 0.3).is_empty());
        assert_eq!(filter_confidence(&dets, 0.0), dets);
    }

    #[test]
    fn box_from_mask_examples() {
        let mut m = Mask::new(10, 10);
        m.set(2, 3, true);
        m.set(5, 7, true);
        assert_eq!(box_from_mask(&m).unwrap(), b(2, 3, 6, 8));

        let full = Mask::from_bits(7, 4, vec![true; 28]).unwrap();
        assert_eq!(box_from_mask(&full).unwrap(), b(0, 0, 7, 4));

        assert!(matches!(
            box_from_mask(&Mask::new(5, 5)),
            Err(Error::EmptyMask)
        ));
    }

    #[test]
    fn merge_examples() {
        let meta = VideoMeta::new(100, 100, 10);
        let dets = vec![det(b(0, 0, 10, 10), 0.9), det(b(50, 50, 60, 60), 0.9)];
        let cfg = PostprocessConfig::default();
        assert_eq!(
            merge_new_detections(&TrackSet::empty(meta), 0, &dets, &cfg),
            dets
        );

        let ts = TrackSet::new(
            meta,
            vec![
                Track::new(0, "obj").with_box(0, b(0, 0, 10, 10)),
                // Absent at frame 0, so it cannot suppress anything there.
                Track::new(1, "obj").with_box(1, b(50, 50, 60, 60)),
            ],
        );
        assert_eq!(
            merge_new_detections(&ts, 0, &dets, &cfg),
            vec![dets[1].clone()]
        );
    }

    #[test]
    fn detections_json_roundtrip() {
        let dets = vec![det(b(1, 2, 3, 4), 0.25), det(b(0, 0, 9, 9), 1.0)];
        let text = detections_to_json(&dets);
        assert_eq!(parse_detections_json(text.as_bytes()).unwrap(), dets);
        assert!(parse_detections_json(
            br#"{"detections":[{"frame":0,"label":"a","confidence":2,"box":[0,0,1,1]}]}"#
        )
        .is_err());
    }

    fn arb_box() -> impl Strategy<Value = BoundingBox> {
        (0..40i32, 0..40i32, 1..30i32, 1..30i32)
            .prop_map(|(x, y, w, h)| BoundingBox::from_xywh(x, y, w, h).unwrap())
    }

    fn arb_dets() -> impl Strategy<Value = Vec<Detection>> {
        prop::collection::vec(
            (arb_box(), 0..4u8, prop::sample::select(vec!["a", "b"])),
            0..12,
        )
        .prop_map(|v| {
            v.into_iter()
                .map(|(bbox, c, l)| Detection {
                    bbox,
                    label: l.into(),
                    confidence: f64::from(c) / 4.0,
                    frame: 0,
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn iou_symmetric_and_bounded(a in arb_box(), c in arb_box()) {
            let v = iou(&a, &c);
            prop_assert_eq!(v, iou(&c, &a));
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert_eq!(iou(&a, &a), 1.0);
        }

        #[test]
        fn nms_idempotent(dets in arb_dets(), t in 0.0..1.0f64) {
            let once = nms(&dets, t);
            prop_assert!(once.len() <= dets.len());
            prop_assert_eq!(nms(&once, t), once);
        }

        #[test]
        fn nms_threshold_one_only_sorts(dets in arb_dets()) {
            let kept = nms(&dets, 1.0);
            prop_assert_eq!(kept.len(), dets.len());
            prop_assert!(kept.windows(2).all(|w| w[0].confidence >= w[1].confidence));
        }

        #[test]
        fn merge_is_ordered_subset(dets in arb_dets(), tracks in prop::collection::vec(arb_box(), 0..4)) {
            let meta = VideoMeta::new(100, 100, 1);
            let ts = TrackSet::new(
                meta,
                tracks.into_iter().enumerate().map(|(i, bb)| Track::new(i as u64, "a").with_box(0, bb)).collect(),
            );
            let out = merge_new_detections(&ts, 0, &dets, &PostprocessConfig::default());
            let mut it = dets.iter();
            for d in &out {
                prop_assert!(it.any(|x| x == d));
            }
        }
    }

    #[test]
    fn config_range_check() {
        assert!(PostprocessConfig::default().check().is_ok());
        let bad = PostprocessConfig {
            nms_iou: 1.5,
            ..PostprocessConfig::default()
        };
        assert!(bad.check().is_err());
    }
}
