//! The text half of the prompt: legend, text-coordinate baseline, token
//! cost model, budget report and the prompt manifest.

mod budget;
mod coords;
mod legend;
mod manifest;
mod tokens;

pub use budget::{budget_report, reduction, ObjectBudget, TokenBudgetReport};
pub use coords::{quantize, quantize_box, serialize_text_coords, serialize_track_coords};
pub use legend::{
    build_legend, parse_legend_text, render_legend_text, Legend, LegendEntry, ENTRY_SEPARATOR,
};
pub use manifest::{assemble_prompt, PromptBundle};
pub use tokens::{count_tokens, CostMode, TokenCostModel};
