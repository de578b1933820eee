use serde::Serialize;

use super::legend::{render_legend_text, Legend};
use crate::error::{Error, Result};

/// The assembled model input, in order: augmented frames, legend, question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptBundle {
    #[serde(rename = "frames")]
    pub augmented_frame_paths: Vec<String>,
    #[serde(rename = "legend")]
    pub legend_text: String,
    pub question: String,
}

impl PromptBundle {
    /// `{ "frames": [...], "legend": "...", "question": "..." }`
    pub fn to_manifest_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

pub fn assemble_prompt(frames: &[String], legend: &Legend, question: &str) -> Result<PromptBundle> {
    if question.trim().is_empty() {
        return Err(Error::EmptyQuestion);
    }
    Ok(PromptBundle {
        augmented_frame_paths: frames.to_vec(),
        legend_text: render_legend_text(legend),
        question: question.to_owned(),
    })
}
