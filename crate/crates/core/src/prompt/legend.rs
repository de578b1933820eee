use crate::error::{Error, Result};
use crate::render::ColorAssignment;
use crate::trackmodel::TrackSet;

pub const ENTRY_SEPARATOR: &str = "; ";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendEntry {
    /// 1-based.
    pub index: usize,
    pub color_name: String,
    pub label: String,
}

impl LegendEntry {
    /// `(<index>) <color> box: <label>`
    pub fn render(&self) -> String {
        format!("({}) {} box: {}", self.index, self.color_name, self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Legend {
    pub entries: Vec<LegendEntry>,
}

impl Legend {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One entry per track, in track-set order. Repeated labels are fine; the
/// color tells them apart.
pub fn build_legend(ts: &TrackSet, assignment: &ColorAssignment) -> Result<Legend> {
    let entries = ts
        .tracks()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let color = assignment.color(t.track_id).ok_or_else(|| {
                Error::validation(Some(t.track_id), "color", "track has no assigned color")
            })?;
            Ok(LegendEntry {
                index: i + 1,
                color_name: color.name.clone(),
                label: t.label.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Legend { entries })
}

pub fn render_legend_text(legend: &Legend) -> String {
    legend
        .entries
        .iter()
        .map(LegendEntry::render)
        .collect::<Vec<_>>()
        .join(ENTRY_SEPARATOR)
}

/// Inverse of [`render_legend_text`].
///
/// Indices must run 1, 2, 3, …; a label ends where `"; (<next index>) "`
/// begins, so labels may contain `;` as long as they do not contain that
/// exact marker.
pub fn parse_legend_text(text: &str) -> Result<Legend> {
    let bad = |msg: String| Error::validation(None, "legend", msg);
    let mut entries = Vec::new();
    let mut rest = text;
    let mut index = 1usize;
    while !rest.is_empty() {
        let head = format!("({index}) ");
        rest = rest
            .strip_prefix(head.as_str())
            .ok_or_else(|| bad(format!("expected entry ({index})")))?;
        let (color_name, after) = rest
            .split_once(" box: ")
            .ok_or_else(|| bad(format!("entry ({index}): expected `<color> box: `")))?;
        if color_name.is_empty() || color_name.contains(';') {
            return Err(bad(format!(
                "entry ({index}): invalid color name {color_name:?}"
            )));
        }
        let next_marker = format!("{ENTRY_SEPARATOR}({}) ", index + 1);
        let (label, remaining) = match after.find(next_marker.as_str()) {
            Some(pos) => (&after[..pos], &after[pos + ENTRY_SEPARATOR.len()..]),
            None => (after, ""),
        };
        entries.push(LegendEntry {
            index,
            color_name: color_name.to_owned(),
            label: label.to_owned(),
        });
        rest = remaining;
        index += 1;
    }
    Ok(Legend { entries })
}
