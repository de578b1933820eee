use serde::Serialize;

use super::coords::{serialize_text_coords, serialize_track_coords};
use super::legend::{build_legend, render_legend_text};
use super::tokens::{count_tokens, TokenCostModel};
use crate::error::Result;
use crate::render::ColorAssignment;
use crate::temporal::SamplePlan;
use crate::trackmodel::TrackSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectBudget {
    pub track_id: u64,
    pub label: String,
    /// Tokens of this track's coordinate line.
    pub coord_tokens: usize,
    /// Tokens of this track's legend entry, separator excluded.
    pub legend_tokens: usize,
}

/// Object-information token cost of both encodings for one video.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokenBudgetReport {
    pub coord_tokens: usize,
    pub legend_tokens: usize,
    /// `(coord - legend) / coord`; 0 when there are no coordinate tokens.
    pub reduction: f64,
    pub num_tracks: usize,
    pub num_samples: u32,
    pub cost_model: TokenCostModel,
    pub per_object: Vec<ObjectBudget>,
}

pub fn reduction(coord_tokens: usize, legend_tokens: usize) -> f64 {
    if coord_tokens == 0 {
        return 0.0;
    }
    (coord_tokens as f64 - legend_tokens as f64) / coord_tokens as f64
}

pub fn budget_report(
    ts: &TrackSet,
    plan: &SamplePlan,
    assignment: &ColorAssignment,
    model: &TokenCostModel,
) -> Result<TokenBudgetReport> {
    let legend = build_legend(ts, assignment)?;
    let coord_tokens = count_tokens(&serialize_text_coords(ts, plan), model);
    let legend_tokens = count_tokens(&render_legend_text(&legend), model);

    let per_object = ts
        .tracks()
        .iter()
        .zip(&legend.entries)
        .map(|(t, entry)| ObjectBudget {
            track_id: t.track_id,
            label: t.label.clone(),
            coord_tokens: count_tokens(
                &serialize_track_coords(t, plan, ts.meta.width, ts.meta.height),
                model,
            ),
            legend_tokens: count_tokens(&entry.render(), model),
        })
        .collect();

    Ok(TokenBudgetReport {
        coord_tokens,
        legend_tokens,
        reduction: reduction(coord_tokens, legend_tokens),
        num_tracks: ts.len(),
        num_samples: plan.num_samples,
        cost_model: *model,
        per_object,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::tokens::CostMode;
    use crate::render::{assign_colors, Palette};
    use crate::temporal::make_sample_plan;
    use crate::trackmodel::{BoundingBox, Track, VideoMeta};

    fn visible_everywhere(n: u64, total: u32) -> TrackSet {
        let meta = VideoMeta::new(100, 100, total);
        TrackSet::new(
            meta,
            (0..n)
                .map(|i| {
                    (0..total).fold(Track::new(i, "person"), |t, f| {
                        let o = 10 + (f % 40) as i32;
                        t.with_box(f, BoundingBox::new(o, 12, o + 50, 88).unwrap())
                    })
                })
                .collect(),
        )
    }

    fn report(ts: &TrackSet, samples: u32, mode: CostMode) -> TokenBudgetReport {
        let plan = make_sample_plan(&ts.meta, samples).unwrap();
        budget_report(
            ts,
            &plan,
            &assign_colors(ts, &Palette::default()),
            &TokenCostModel::new(mode),
        )
        .unwrap()
    }

    #[test]
    fn eight_tracks_nine_keyframes_regime() {
        let ts = visible_everywhere(8, 90);
        for mode in [CostMode::ApproxBpe, CostMode::WordPunct] {
            let r = report(&ts, 9, mode);
            assert!(r.reduction >= 0.85, "{mode:?}: {r:?}");
            assert_eq!(r.per_object.len(), 8);
            // Legend separators add one `;` token each.
            let entry_sum: usize = r.per_object.iter().map(|o| o.legend_tokens).sum();
            assert_eq!(r.legend_tokens, entry_sum + 7);
            let line_sum: usize = r.per_object.iter().map(|o| o.coord_tokens).sum();
            assert_eq!(r.coord_tokens, line_sum);
        }
    }

    #[test]
    fn degenerate_scale_is_well_formed() {
        let meta = VideoMeta::new(100, 100, 1);
        let ts = TrackSet::new(
            meta,
            vec![Track::new(0, "x").with_box(0, BoundingBox::new(0, 0, 9, 9).unwrap())],
        );
        let r = report(&ts, 1, CostMode::ApproxBpe);
        assert!(r.reduction.is_finite());
        assert!(serde_json::to_string(&r).is_ok());

        let empty = report(&TrackSet::empty(meta), 1, CostMode::ApproxBpe);
        assert_eq!(
            (empty.coord_tokens, empty.legend_tokens, empty.reduction),
            (0, 0, 0.0)
        );
    }

    #[test]
    fn doubling_samples_doubles_entries_not_legend() {
        let ts = visible_everywhere(3, 64);
        let plan8 = make_sample_plan(&ts.meta, 8).unwrap();
        let plan16 = make_sample_plan(&ts.meta, 16).unwrap();
        let entries = |p: &SamplePlan| serialize_text_coords(&ts, p).matches("frame ").count();
        assert_eq!(entries(&plan16), 2 * entries(&plan8));
        for mode in [CostMode::ApproxBpe, CostMode::WordPunct] {
            let (a, b) = (report(&ts, 8, mode), report(&ts, 16, mode));
            assert_eq!(a.legend_tokens, b.legend_tokens);
            assert!(b.coord_tokens > a.coord_tokens);
        }
    }
}
