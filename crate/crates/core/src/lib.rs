//! Compile multi-object track annotations into visual prompts: colored boxes
//! and trajectory trails drawn on sampled keyframes, plus a short text legend
//! tying each color to an object label.
//!
//! The usual pipeline is
//! [`parse_tracks_json`](trackmodel::parse_tracks_json) →
//! [`make_sample_plan`](temporal::make_sample_plan) →
//! [`assign_colors`](render::assign_colors) →
//! [`build_overlays`](render::build_overlays) / [`render_frame`](render::render_frame) →
//! [`build_legend`](prompt::build_legend).
//!
//! ```
//! use boxprompt::prompt::{build_legend, render_legend_text};
//! use boxprompt::render::{assign_colors, build_overlays, render_frame, FrameImage, Palette, RenderConfig, Rgb};
//! use boxprompt::temporal::make_sample_plan;
//! use boxprompt::trackmodel::parse_tracks_json;
//!
//! let ts = parse_tracks_json(br#"{
//!     "meta": {"width": 64, "height": 48, "total_frames": 8},
//!     "tracks": [{"id": 1, "label": "dog",
//!                 "boxes": {"0": [4, 4, 20, 20], "2": [8, 6, 24, 22], "4": [12, 8, 28, 24]}}]
//! }"#)?;
//! let plan = make_sample_plan(&ts.meta, 4)?; // frames 0, 2, 4, 6
//! let colors = assign_colors(&ts, &Palette::default());
//! let cfg = RenderConfig::default();
//!
//! let blank = FrameImage::new(64, 48, Rgb([0, 0, 0]));
//! for overlay in build_overlays(&ts, &plan, &colors, &cfg) {
//!     let _augmented = render_frame(&blank, &overlay, &cfg)?;
//! }
//! let legend = build_legend(&ts, &colors)?;
//! assert_eq!(render_legend_text(&legend), "(1) red box: dog");
//! # Ok::<(), boxprompt::Error>(())
//! ```

pub mod detpost;
pub mod error;
pub mod prompt;
pub mod render;
pub mod synth;
pub mod temporal;
pub mod trackmodel;

pub use error::{Error, Result};
