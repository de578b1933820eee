//! The `boxprompt` command line.
//!
//! Exit codes: 0 success, 1 domain error (invalid tracks, missing keyframe,
//! too few frames, ...), 2 I/O or usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use boxprompt::detpost::{detections_to_json, PostprocessConfig};
use boxprompt::prompt::{CostMode, TokenCostModel};
use boxprompt::render::{ImageFormat, Palette, RenderConfig};
use boxprompt::synth::{example_scene, parse_scene_spec, Perturbation};
use boxprompt::temporal::{TrailMode, DEFAULT_NUM_SAMPLES};
use boxprompt::trackmodel::{Diagnostic, VideoMeta};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

pub use commands::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] boxprompt::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("missing frame file for index {0}")]
    MissingFrame(u32),

    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) | CliError::Core(boxprompt::Error::Io(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "boxprompt",
    version,
    about = "Compile object tracks into visual prompts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a tracks file; diagnostics go to standard error.
    Validate(TrackArgs),
    /// Draw boxes and trails on the sampled keyframes.
    Render(RenderArgs),
    /// Print the color legend.
    Legend(TrackArgs),
    /// Print the text-coordinate encoding of the tracks.
    Serialize(SampledArgs),
    /// Print a token budget report comparing both encodings.
    Budget(BudgetArgs),
    /// Generate a synthetic scene with ground-truth tracks.
    Synth(SynthArgs),
    /// Filter, suppress and dedup detections; print new-track seeds.
    Postprocess(PostprocessArgs),
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    /// Tracks file: `.json`, anything else is read as MOT text.
    #[arg(long)]
    pub tracks: PathBuf,
    /// Frame width (MOT input only).
    #[arg(long)]
    pub width: Option<u32>,
    /// Frame height (MOT input only).
    #[arg(long)]
    pub height: Option<u32>,
    /// Video length in frames (MOT input only).
    #[arg(long)]
    pub total_frames: Option<u32>,
}

impl TrackArgs {
    pub fn source(&self) -> TrackSource {
        let meta = match (self.width, self.height, self.total_frames) {
            (Some(w), Some(h), Some(f)) => Some(VideoMeta::new(w, h, f)),
            _ => None,
        };
        TrackSource {
            path: self.tracks.clone(),
            meta,
        }
    }
}

#[derive(Debug, Args)]
pub struct SampledArgs {
    #[command(flatten)]
    pub tracks: TrackArgs,
    #[arg(long, default_value_t = DEFAULT_NUM_SAMPLES)]
    pub num_samples: u32,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub sampled: SampledArgs,
    /// Directory holding `frame_NNNNNN.png` or `.ppm`, numbered from 0.
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Question text stored in the manifest.
    #[arg(long)]
    pub question: String,
    /// `adaptive` or `fixed:<L>`.
    #[arg(long, default_value = "adaptive")]
    pub trail: TrailMode,
    #[arg(long, default_value_t = 3)]
    pub box_width: u32,
    #[arg(long, default_value_t = 2)]
    pub trail_width: u32,
    /// Do not join each trail to its box center.
    #[arg(long)]
    pub no_trail_connector: bool,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[command(flatten)]
    pub sampled: SampledArgs,
    /// `approx-bpe` or `word-punct`.
    #[arg(long, default_value = "approx-bpe")]
    pub cost_model: CostMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameFormat {
    Ppm,
    Png,
}

impl From<FrameFormat> for ImageFormat {
    fn from(f: FrameFormat) -> Self {
        match f {
            FrameFormat::Ppm => ImageFormat::Ppm,
            FrameFormat::Png => ImageFormat::Png,
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scene spec JSON; the bundled example when omitted.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FrameFormat::Ppm)]
    pub format: FrameFormat,
    /// Seed for detection noise; defaults to the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge jitter in pixels. Any of the noise flags enables `detections.json`.
    #[arg(long)]
    pub jitter: Option<u32>,
    #[arg(long)]
    pub drop_rate: Option<f64>,
    #[arg(long)]
    pub dup_rate: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PostprocessArgs {
    #[command(flatten)]
    pub sampled: SampledArgs,
    /// Detections JSON.
    #[arg(long)]
    pub detections: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    pub conf_threshold: f64,
    #[arg(long, default_value_t = 0.5)]
    pub nms_iou: f64,
    #[arg(long, default_value_t = 0.5)]
    pub dedup_iou: f64,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Validate(a) => {
            let diags = cmd_validate(&a.source())?;
            for d in &diags {
                let _ = writeln!(err, "{d}");
            }
            Ok(if has_errors(&diags) { 1 } else { 0 })
        }
        Command::Render(a) => {
            let ts = load_tracks(&a.sampled.tracks.source())?;
            let opts = RenderOptions {
                num_samples: a.sampled.num_samples,
                render: RenderConfig {
                    box_width: a.box_width,
                    trail_width: a.trail_width,
                    trail_mode: a.trail,
                    connect_trail_to_box: !a.no_trail_connector,
                },
                palette: Palette::default(),
                question: a.question,
            };
            let result = cmd_render(&ts, &a.frames, &a.out, &opts)?;
            for w in &result.warnings {
                let _ = writeln!(err, "{w}");
            }
            Ok(0)
        }
        Command::Legend(a) => {
            let ts = load_tracks(&a.source())?;
            emit(out, &cmd_legend(&ts, &Palette::default())?)?;
            Ok(0)
        }
        Command::Serialize(a) => {
            let ts = load_tracks(&a.tracks.source())?;
            emit(out, &cmd_serialize(&ts, a.num_samples)?)?;
            Ok(0)
        }
        Command::Budget(a) => {
            let ts = load_tracks(&a.sampled.tracks.source())?;
            let report = cmd_budget(
                &ts,
                a.sampled.num_samples,
                &TokenCostModel::new(a.cost_model),
            )?;
            emit(
                out,
                &serde_json::to_string_pretty(&report).expect("report serializes"),
            )?;
            Ok(0)
        }
        Command::Synth(a) => {
            let spec = match &a.spec {
                Some(path) => parse_scene_spec(&commands::read(path)?)?,
                None => example_scene(),
            };
            let perturb = (a.jitter.is_some() || a.drop_rate.is_some() || a.dup_rate.is_some())
                .then(|| {
                    let p = Perturbation {
                        jitter: a.jitter.unwrap_or(0),
                        drop_rate: a.drop_rate.unwrap_or(0.0),
                        duplicate_rate: a.dup_rate.unwrap_or(0.0),
                    };
                    (a.seed.unwrap_or(spec.seed), p)
                });
            cmd_synth(&spec, &a.out, a.format.into(), perturb)?;
            Ok(0)
        }
        Command::Postprocess(a) => {
            let ts = load_tracks(&a.sampled.tracks.source())?;
            let cfg = PostprocessConfig {
                confidence_threshold: a.conf_threshold,
                nms_iou: a.nms_iou,
                dedup_iou: a.dedup_iou,
            };
            let seeds = cmd_postprocess(&ts, &a.detections, a.sampled.num_samples, &cfg)?;
            emit(out, &detections_to_json(&seeds))?;
            Ok(0)
        }
    }
}
