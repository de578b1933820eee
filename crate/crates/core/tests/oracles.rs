mod support;

use boxprompt::detpost::{
    box_from_mask, iou, merge_new_detections, nms, Detection, PostprocessConfig,
};
use boxprompt::render::line_pixels;
use boxprompt::temporal::{make_sample_plan, trail_window, TrailMode};
use boxprompt::trackmodel::{BoundingBox, Mask, Track, TrackSet, VideoMeta};
use proptest::prelude::*;
use support::*;

fn arb_box(max: i32) -> impl Strategy<Value = BoundingBox> {
    (0..max, 0..max, 1..max / 2, 1..max / 2)
        .prop_map(|(x, y, w, h)| BoundingBox::new(x, y, x + w, y + h).unwrap())
}

fn arb_detection() -> impl Strategy<Value = Detection> {
    // Coarse confidences and a small grid make ties and overlaps common.
    (arb_box(16), prop::sample::select(vec!["a", "b"]), 0u8..5).prop_map(|(bbox, label, c)| {
        Detection {
            bbox,
            label: label.into(),
            confidence: f64::from(c) / 4.0,
            frame: 0,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn iou_matches_oracle(a in arb_box(40), b in arb_box(40)) {
        prop_assert_eq!(iou(&a, &b), iou_oracle(&a, &b));
    }

    #[test]
    fn nms_matches_pool_oracle(
        dets in prop::collection::vec(arb_detection(), 0..12),
        t in prop::sample::select(vec![0.0, 0.1, 0.3, 0.5, 0.7, 1.0]),
    ) {
        prop_assert_eq!(nms(&dets, t), nms_oracle(&dets, t));
    }

    #[test]
    fn box_from_mask_matches_scan(bits in prop::collection::vec(prop::bool::weighted(0.03), 24 * 20)) {
        let mask = Mask::from_bits(24, 20, bits).unwrap();
        match (box_from_mask(&mask), mask_extent_oracle(&mask)) {
            (Ok(b), Some((x1, y1, x2, y2))) => {
                prop_assert_eq!((b.x1(), b.y1(), b.x2(), b.y2()), (x1, y1, x2, y2));
                prop_assert!(line_has_bit(&mask, x1 as u32, false));
                prop_assert!(line_has_bit(&mask, x2 as u32 - 1, false));
                prop_assert!(line_has_bit(&mask, y1 as u32, true));
                prop_assert!(line_has_bit(&mask, y2 as u32 - 1, true));
            }
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "{got:?} vs {want:?}"),
        }
    }

    #[test]
    fn lines_match_nearest_pixel_oracle(a in (-20i64..20, -20i64..20), b in (-20i64..20, -20i64..20)) {
        prop_assert_eq!(line_pixels(a, b), line_oracle(a, b));
    }

    #[test]
    fn merge_matches_pairwise_oracle(
        existing in prop::collection::vec(arb_box(16), 0..5),
        dets in prop::collection::vec(arb_detection(), 0..8),
        dedup in prop::sample::select(vec![0.0, 0.3, 0.5, 0.9]),
    ) {
        let meta = VideoMeta::new(32, 32, 4);
        let tracks = existing
            .iter()
            .enumerate()
            .map(|(i, b)| Track::new(i as u64, "t").with_box(2, *b))
            .collect();
        let ts = TrackSet::new(meta, tracks);
        let cfg = PostprocessConfig { dedup_iou: dedup, ..PostprocessConfig::default() };
        prop_assert_eq!(merge_new_detections(&ts, 2, &dets, &cfg), merge_oracle(&existing, &dets, dedup));
        // Boxes at other frames never count as duplicates.
        prop_assert_eq!(merge_new_detections(&ts, 1, &dets, &cfg), dets);
    }

    #[test]
    fn adaptive_trails_tile_the_sampled_span(total in 1u32..3000, t in 1u32..80) {
        prop_assume!(t <= total);
        let plan = make_sample_plan(&VideoMeta::new(8, 8, total), t).unwrap();
        let len = TrailMode::Adaptive.length(&plan);
        let windows: Vec<_> = plan.indices[1..].iter().map(|&f| trail_window(f, len)).collect();
        let cover = coverage(&windows, total);
        let last = *plan.indices.last().unwrap() as usize;
        prop_assert!(cover[..last].iter().all(|&c| c == 1));
        prop_assert!(cover[last..].iter().all(|&c| c == 0));
    }
}

#[test]
fn nms_oracle_sanity() {
    let d = |x: i32, c: f64| Detection {
        bbox: BoundingBox::new(x, 0, x + 10, 10).unwrap(),
        label: "a".into(),
        confidence: c,
        frame: 0,
    };
    // Overlap 9/11 suppresses; 0/20 does not.
    let kept = nms_oracle(&[d(1, 0.5), d(0, 0.9), d(20, 0.1)], 0.5);
    assert_eq!(kept, vec![d(0, 0.9), d(20, 0.1)]);
}

#[test]
fn line_oracle_sanity() {
    assert_eq!(
        line_oracle((0, 0), (4, 2)),
        vec![(0, 0), (1, 0), (2, 1), (3, 1), (4, 2)]
    );
    assert_eq!(line_oracle((0, 0), (0, -2)), vec![(0, -2), (0, -1), (0, 0)]);
}
