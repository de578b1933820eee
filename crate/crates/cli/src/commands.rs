use std::fs;
use std::path::{Path, PathBuf};

use boxprompt::detpost::{
    detections_to_json, parse_detections_json, postprocess_keyframe, Detection, PostprocessConfig,
};
use boxprompt::prompt::{
    assemble_prompt, budget_report, build_legend, render_legend_text, serialize_text_coords,
    PromptBundle, TokenBudgetReport, TokenCostModel,
};
use boxprompt::render::{
    assign_colors, build_overlays, decode_image, encode_image, find_frame, frame_file_name,
    render_frame, ImageFormat, Palette, RenderConfig,
};
use boxprompt::synth::{generate_scene, perturb_detections, Perturbation, SceneSpec};
use boxprompt::temporal::make_sample_plan;
use boxprompt::trackmodel::{
    decode_tracks_json, parse_tracks_json, parse_tracks_mot, tracks_to_json, validate_tracks,
    Diagnostic, Severity, TrackSet, VideoMeta,
};
use rayon::prelude::*;

use crate::CliError;

/// Where a track set comes from. MOT files carry no frame size, so `meta`
/// must be given for anything but `.json`.
#[derive(Debug, Clone)]
pub struct TrackSource {
    pub path: PathBuf,
    pub meta: Option<VideoMeta>,
}

impl TrackSource {
    pub fn json(path: impl Into<PathBuf>) -> Self {
        TrackSource {
            path: path.into(),
            meta: None,
        }
    }

    fn is_json(&self) -> bool {
        self.path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    }

    fn mot_meta(&self) -> Result<VideoMeta, CliError> {
        self.meta.ok_or_else(|| {
            CliError::Usage("MOT input needs --width, --height and --total-frames".into())
        })
    }
}

pub(crate) fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses and validates; any error-severity diagnostic fails.
pub fn load_tracks(src: &TrackSource) -> Result<TrackSet, CliError> {
    let bytes = read(&src.path)?;
    if src.is_json() {
        return Ok(parse_tracks_json(&bytes)?);
    }
    let ts = parse_tracks_mot(&bytes, src.mot_meta()?)?;
    if let Some(d) = validate_tracks(&ts).into_iter().find(Diagnostic::is_error) {
        return Err(CliError::Invalid(vec![d]));
    }
    Ok(ts)
}

/// Every diagnostic for the file, warnings included. Malformed input is an
/// `Err`; a well-formed file with invalid content is `Ok` with errors inside.
pub fn cmd_validate(src: &TrackSource) -> Result<Vec<Diagnostic>, CliError> {
    let bytes = read(&src.path)?;
    let ts = if src.is_json() {
        decode_tracks_json(&bytes)?
    } else {
        parse_tracks_mot(&bytes, src.mot_meta()?)?
    };
    Ok(validate_tracks(&ts))
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub num_samples: u32,
    pub render: RenderConfig,
    pub palette: Palette,
    pub question: String,
}

impl RenderOptions {
    pub fn new(question: impl Into<String>) -> Self {
        RenderOptions {
            num_samples: boxprompt::temporal::DEFAULT_NUM_SAMPLES,
            render: RenderConfig::default(),
            palette: Palette::default(),
            question: question.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOutput {
    /// Written frame files, in keyframe order.
    pub frames: Vec<PathBuf>,
    pub bundle: PromptBundle,
    pub warnings: Vec<Diagnostic>,
}

pub const LEGEND_FILE: &str = "legend.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Draws overlays on every keyframe found in `frames_dir` and writes them,
/// with `legend.txt` and `manifest.json`, to `out_dir`.
///
/// Output frames keep their input name and format. A keyframe with nothing
/// to draw is copied byte for byte.
pub fn cmd_render(
    ts: &TrackSet,
    frames_dir: &Path,
    out_dir: &Path,
    opts: &RenderOptions,
) -> Result<RenderOutput, CliError> {
    opts.render.check()?;
    let plan = make_sample_plan(&ts.meta, opts.num_samples)?;
    let inputs = plan
        .indices
        .iter()
        .map(|&i| find_frame(frames_dir, i).ok_or(CliError::MissingFrame(i)))
        .collect::<Result<Vec<(PathBuf, ImageFormat)>, _>>()?;

    let assignment = assign_colors(ts, &opts.palette);
    let legend = build_legend(ts, &assignment)?;
    let overlays = build_overlays(ts, &plan, &assignment, &opts.render);
    let names: Vec<String> = plan
        .indices
        .iter()
        .zip(&inputs)
        .map(|(&i, (_, fmt))| frame_file_name(i, *fmt))
        .collect();
    let bundle = assemble_prompt(&names, &legend, &opts.question)?;

    create_dir(out_dir)?;
    overlays
        .par_iter()
        .zip(inputs.par_iter())
        .zip(names.par_iter())
        .try_for_each(|((ov, (path, fmt)), name)| -> Result<(), CliError> {
            let bytes = read(path)?;
            let out = if ov.items.is_empty() {
                bytes
            } else {
                let img = decode_image(&bytes, *fmt)?;
                encode_image(&render_frame(&img, ov, &opts.render)?, *fmt)?
            };
            write(&out_dir.join(name), &out)
        })?;

    write(
        &out_dir.join(LEGEND_FILE),
        render_legend_text(&legend).as_bytes(),
    )?;
    let mut manifest = bundle.to_manifest_json();
    manifest.push('\n');
    write(&out_dir.join(MANIFEST_FILE), manifest.as_bytes())?;

    Ok(RenderOutput {
        frames: names.iter().map(|n| out_dir.join(n)).collect(),
        bundle,
        warnings: assignment.warnings.clone(),
    })
}

pub fn cmd_legend(ts: &TrackSet, palette: &Palette) -> Result<String, CliError> {
    let legend = build_legend(ts, &assign_colors(ts, palette))?;
    Ok(render_legend_text(&legend))
}

pub fn cmd_serialize(ts: &TrackSet, num_samples: u32) -> Result<String, CliError> {
    let plan = make_sample_plan(&ts.meta, num_samples)?;
    Ok(serialize_text_coords(ts, &plan))
}

pub fn cmd_budget(
    ts: &TrackSet,
    num_samples: u32,
    model: &TokenCostModel,
) -> Result<TokenBudgetReport, CliError> {
    let plan = make_sample_plan(&ts.meta, num_samples)?;
    let assignment = assign_colors(ts, &Palette::default());
    Ok(budget_report(ts, &plan, &assignment, model)?)
}

pub const TRUTH_FILE: &str = "tracks.json";
pub const DETECTIONS_FILE: &str = "detections.json";

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub frames: Vec<PathBuf>,
    pub tracks: PathBuf,
    pub detections: Option<PathBuf>,
}

/// Writes every frame, the truth tracks and, when `perturb` is given,
/// noisy detections derived from the truth.
pub fn cmd_synth(
    spec: &SceneSpec,
    out_dir: &Path,
    format: ImageFormat,
    perturb: Option<(u64, Perturbation)>,
) -> Result<SynthOutput, CliError> {
    let (frames, truth) = generate_scene(spec)?;
    let detections = perturb
        .map(|(seed, p)| perturb_detections(&truth, seed, p))
        .transpose()?;

    create_dir(out_dir)?;
    let paths = frames
        .par_iter()
        .enumerate()
        .map(|(i, img)| {
            let path = out_dir.join(frame_file_name(i as u32, format));
            write(&path, &encode_image(img, format)?)?;
            Ok(path)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let tracks = out_dir.join(TRUTH_FILE);
    write(&tracks, (tracks_to_json(&truth) + "\n").as_bytes())?;
    let detections = match detections {
        Some(per_frame) => {
            let flat: Vec<Detection> = per_frame.into_iter().flatten().collect();
            let path = out_dir.join(DETECTIONS_FILE);
            write(&path, (detections_to_json(&flat) + "\n").as_bytes())?;
            Some(path)
        }
        None => None,
    };
    Ok(SynthOutput {
        frames: paths,
        tracks,
        detections,
    })
}

/// Runs the detection clean-up on every keyframe and returns the survivors
/// that would seed new tracks.
pub fn cmd_postprocess(
    ts: &TrackSet,
    detections: &Path,
    num_samples: u32,
    cfg: &PostprocessConfig,
) -> Result<Vec<Detection>, CliError> {
    cfg.check()?;
    let plan = make_sample_plan(&ts.meta, num_samples)?;
    let dets = parse_detections_json(&read(detections)?)?;
    Ok(plan
        .indices
        .iter()
        .flat_map(|&f| postprocess_keyframe(ts, f, &dets, cfg))
        .collect())
}
