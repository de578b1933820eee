//! Synthetic moving-shape videos with exact ground truth.
//!
//! Objects move linearly and bounce off the frame edges. Fill colors and the
//! background never coincide with an overlay palette color, so every overlay
//! pixel in a rendered frame can be attributed.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detpost::{box_from_mask, Detection};
use crate::error::{Error, Result};
use crate::render::{FrameImage, Palette, Rgb};
use crate::trackmodel::{BoundingBox, Mask, Track, TrackSet, VideoMeta};

pub const DEFAULT_BACKGROUND: [u8; 3] = [32, 32, 32];

/// A 160x120, 100-frame scene with five objects entering and leaving.
pub const EXAMPLE_SCENE_JSON: &str = include_str!("../data/example_scene.json");

pub fn example_scene() -> SceneSpec {
    parse_scene_spec(EXAMPLE_SCENE_JSON.as_bytes()).expect("bundled scene is valid")
}

/// Fill colors used by [`SceneSpec::random`]; none is a palette color.
pub const FILL_COLORS: [[u8; 3]; 6] = [
    [96, 96, 96],
    [120, 100, 80],
    [70, 110, 90],
    [100, 80, 120],
    [140, 140, 150],
    [60, 80, 110],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Circle,
    Square,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Circle => "circle",
            Shape::Square => "square",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneObject {
    pub shape: Shape,
    /// Side length, or diameter for circles.
    pub size: u32,
    pub color: [u8; 3],
    /// Top-left corner at frame 0.
    pub position: [i32; 2],
    /// Pixels per frame.
    pub velocity: [i32; 2],
    #[serde(default)]
    pub enter_frame: u32,
    /// Exclusive; defaults to the end of the video.
    #[serde(default)]
    pub exit_frame: Option<u32>,
    /// Defaults to the shape name.
    #[serde(default)]
    pub label: Option<String>,
}

impl SceneObject {
    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.shape.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneMeta {
    pub width: u32,
    pub height: u32,
    pub total_frames: u32,
    #[serde(default)]
    pub fps: Option<f64>,
}

impl From<SceneMeta> for VideoMeta {
    fn from(m: SceneMeta) -> Self {
        VideoMeta {
            width: m.width,
            height: m.height,
            total_frames: m.total_frames,
            fps: m.fps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub meta: SceneMeta,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_background")]
    pub background: [u8; 3],
    #[serde(default)]
    pub objects: Vec<SceneObject>,
}

fn default_background() -> [u8; 3] {
    DEFAULT_BACKGROUND
}

impl SceneSpec {
    pub fn video_meta(&self) -> VideoMeta {
        self.meta.into()
    }

    pub fn check(&self, palette: &Palette) -> Result<()> {
        let m = &self.meta;
        if m.width == 0 || m.height == 0 || m.total_frames == 0 {
            return Err(Error::Scene(
                "width, height and total_frames must be positive".into(),
            ));
        }
        if palette.contains_rgb(Rgb(self.background)) {
            return Err(Error::Scene("background color is a palette color".into()));
        }
        for (i, o) in self.objects.iter().enumerate() {
            let fail = |msg: &str| Err(Error::Scene(format!("object {i}: {msg}")));
            if o.size == 0 || o.size > m.width || o.size > m.height {
                return fail("size must be between 1 and the frame size");
            }
            let [x, y] = o.position;
            if x < 0 || y < 0 || x as u32 + o.size > m.width || y as u32 + o.size > m.height {
                return fail("initial position puts the shape outside the frame");
            }
            if palette.contains_rgb(Rgb(o.color)) || o.color == self.background {
                return fail("fill color collides with the palette or background");
            }
            let exit = o.exit_frame.unwrap_or(m.total_frames);
            if o.enter_frame >= exit || exit > m.total_frames {
                return fail("need enter_frame < exit_frame <= total_frames");
            }
        }
        Ok(())
    }

    /// `n` random objects, reproducible from `seed`.
    pub fn random(meta: VideoMeta, seed: u64, n: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_size = (meta.width.min(meta.height) / 4).max(12);
        let objects = (0..n)
            .map(|_| {
                let size = rng
                    .random_range(12..=max_size)
                    .min(meta.width.min(meta.height));
                let shape = if rng.random_bool(0.5) {
                    Shape::Circle
                } else {
                    Shape::Square
                };
                let x = rng.random_range(0..=(meta.width - size)) as i32;
                let y = rng.random_range(0..=(meta.height - size)) as i32;
                let velocity = [rng.random_range(-3..=3), rng.random_range(-3..=3)];
                let enter_frame = rng.random_range(0..meta.total_frames.div_ceil(2));
                SceneObject {
                    shape,
                    size,
                    color: FILL_COLORS[rng.random_range(0..FILL_COLORS.len())],
                    position: [x, y],
                    velocity,
                    enter_frame,
                    exit_frame: None,
                    label: None,
                }
            })
            .collect();
        SceneSpec {
            meta: SceneMeta {
                width: meta.width,
                height: meta.height,
                total_frames: meta.total_frames,
                fps: meta.fps,
            },
            seed,
            background: DEFAULT_BACKGROUND,
            objects,
        }
    }
}

pub fn parse_scene_spec(bytes: &[u8]) -> Result<SceneSpec> {
    let spec: SceneSpec = serde_json::from_slice(bytes).map_err(|e| {
        let line_start: usize = bytes
            .split(|&b| b == b'\n')
            .take(e.line().saturating_sub(1))
            .map(|l| l.len() + 1)
            .sum();
        Error::Json {
            offset: (line_start + e.column().saturating_sub(1)).min(bytes.len()),
            message: e.to_string(),
        }
    })?;
    spec.check(&Palette::default())?;
    Ok(spec)
}

/// Folds `pos` into `[0, max]` by mirror reflection, flipping `vel` once per
/// bounce.
fn reflect(mut pos: i64, mut vel: i64, max: i64) -> (i64, i64) {
    if max == 0 {
        return (0, vel);
    }
    loop {
        if pos < 0 {
            pos = -pos;
            vel = -vel;
        } else if pos > max {
            pos = 2 * max - pos;
            vel = -vel;
        } else {
            return (pos, vel);
        }
    }
}

/// Top-left corner of `obj` at every frame.
pub fn trajectory(obj: &SceneObject, meta: &VideoMeta) -> Vec<(i64, i64)> {
    let max_x = i64::from(meta.width) - i64::from(obj.size);
    let max_y = i64::from(meta.height) - i64::from(obj.size);
    let (mut x, mut y) = (i64::from(obj.position[0]), i64::from(obj.position[1]));
    let (mut vx, mut vy) = (i64::from(obj.velocity[0]), i64::from(obj.velocity[1]));
    let mut out = Vec::with_capacity(meta.total_frames as usize);
    for _ in 0..meta.total_frames {
        out.push((x, y));
        (x, vx) = reflect(x + vx, vx, max_x);
        (y, vy) = reflect(y + vy, vy, max_y);
    }
    out
}

/// Pixels covered by `shape` of `size` with top-left corner `(x, y)`.
pub fn shape_mask(shape: Shape, size: u32, x: i64, y: i64, meta: &VideoMeta) -> Mask {
    let mut mask = Mask::new(meta.width, meta.height);
    let s = i64::from(size);
    for py in y.max(0)..(y + s).min(i64::from(meta.height)) {
        for px in x.max(0)..(x + s).min(i64::from(meta.width)) {
            let inside = match shape {
                Shape::Square => true,
                // Pixel center within the inscribed circle, in doubled units.
                Shape::Circle => {
                    let dx = 2 * (px - x) + 1 - s;
                    let dy = 2 * (py - y) + 1 - s;
                    dx * dx + dy * dy <= s * s
                }
            };
            if inside {
                mask.set(px as u32, py as u32, true);
            }
        }
    }
    mask
}

/// Renders every frame and the matching ground-truth tracks. Track ids are
/// object positions in the spec; later objects paint over earlier ones.
pub fn generate_scene(spec: &SceneSpec) -> Result<(Vec<FrameImage>, TrackSet)> {
    spec.check(&Palette::default())?;
    let meta = spec.video_meta();
    let background = Rgb(spec.background);
    let mut frames =
        vec![FrameImage::new(meta.width, meta.height, background); meta.total_frames as usize];
    let mut tracks = Vec::with_capacity(spec.objects.len());

    for (id, obj) in spec.objects.iter().enumerate() {
        let mut track = Track::new(id as u64, obj.label());
        let exit = obj.exit_frame.unwrap_or(meta.total_frames);
        let path = trajectory(obj, &meta);
        for frame in obj.enter_frame..exit {
            let (x, y) = path[frame as usize];
            let mask = shape_mask(obj.shape, obj.size, x, y, &meta);
            let img = &mut frames[frame as usize];
            for (i, _) in mask.bits().iter().enumerate().filter(|(_, &b)| b) {
                img.set(i as u32 % meta.width, i as u32 / meta.width, Rgb(obj.color));
            }
            track.boxes.insert(frame, box_from_mask(&mask)?);
        }
        tracks.push(track);
    }
    Ok((frames, TrackSet::new(meta, tracks)))
}

/// Settings for [`perturb_detections`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    /// Each box edge moves by a uniform integer in `[-jitter, jitter]`.
    pub jitter: u32,
    pub drop_rate: f64,
    pub duplicate_rate: f64,
}

/// Minimum IoU between an injected duplicate and the detection it copies.
pub const DUPLICATE_MIN_IOU: f64 = 0.7;

/// Turns ground truth into noisy per-frame detector output.
///
/// Index `f` of the result holds the detections of frame `f`. Detections get
/// confidences in `[0.5, 1)`; injected duplicates overlap their source with
/// IoU above [`DUPLICATE_MIN_IOU`] and always score lower.
pub fn perturb_detections(
    truth: &TrackSet,
    seed: u64,
    p: Perturbation,
) -> Result<Vec<Vec<Detection>>> {
    for (name, rate) in [
        ("drop_rate", p.drop_rate),
        ("duplicate_rate", p.duplicate_rate),
    ] {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::validation(
                None,
                name,
                format!("{rate} outside [0, 1]"),
            ));
        }
    }
    let meta = truth.meta;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Vec::new(); meta.total_frames as usize];
    let j = i64::from(p.jitter);

    for frame in 0..meta.total_frames {
        for track in truth.tracks() {
            let Some(b) = track.box_at(frame) else {
                continue;
            };
            let confidence = rng.random_range(0.5..1.0);
            if rng.random_bool(p.drop_rate) {
                continue;
            }
            let bbox = if j > 0 {
                let mut e = [b.x1(), b.y1(), b.x2(), b.y2()].map(i64::from);
                for v in &mut e {
                    *v += rng.random_range(-j..=j);
                }
                jittered_box(e, b, &meta)
            } else {
                *b
            };
            let det = Detection {
                bbox,
                label: track.label.clone(),
                confidence,
                frame,
            };
            if rng.random_bool(p.duplicate_rate) {
                let dup = near_duplicate(&mut rng, &det, &meta);
                out[frame as usize].push(det);
                out[frame as usize].push(dup);
            } else {
                out[frame as usize].push(det);
            }
        }
    }
    Ok(out)
}

fn jittered_box(e: [i64; 4], fallback: &BoundingBox, meta: &VideoMeta) -> BoundingBox {
    let w = i64::from(meta.width);
    let h = i64::from(meta.height);
    let x1 = e[0].clamp(0, w - 1);
    let y1 = e[1].clamp(0, h - 1);
    let x2 = e[2].clamp(x1 + 1, w);
    let y2 = e[3].clamp(y1 + 1, h);
    BoundingBox::new(x1 as i32, y1 as i32, x2 as i32, y2 as i32).unwrap_or(*fallback)
}

fn near_duplicate(rng: &mut ChaCha8Rng, det: &Detection, meta: &VideoMeta) -> Detection {
    let b = det.bbox;
    let reach = (b.width().min(b.height()) / 10).max(1);
    // Mirror a shift that would leave the frame; drop it if neither way fits.
    let fit = |d: i64, lo: i32, hi: i32, limit: u32| -> i32 {
        let ok = |d: i64| i64::from(lo) + d >= 0 && i64::from(hi) + d <= i64::from(limit);
        [d, -d].into_iter().find(|&d| ok(d)).unwrap_or(0) as i32
    };
    let dx = fit(rng.random_range(-reach..=reach), b.x1(), b.x2(), meta.width);
    let dy = fit(
        rng.random_range(-reach..=reach),
        b.y1(),
        b.y2(),
        meta.height,
    );
    let shifted = BoundingBox::new(b.x1() + dx, b.y1() + dy, b.x2() + dx, b.y2() + dy).unwrap_or(b);
    let bbox = if crate::detpost::iou(&shifted, &b) > DUPLICATE_MIN_IOU {
        shifted
    } else {
        b
    };
    Detection {
        bbox,
        label: det.label.clone(),
        confidence: det.confidence * rng.random_range(0.5..0.95),
        frame: det.frame,
    }
}
