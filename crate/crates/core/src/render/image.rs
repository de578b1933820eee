//! RGB frames and their on-disk encodings (binary PPM and PNG).

use std::io::Cursor;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rgb(pub [u8; 3]);

/// Row-major 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl FrameImage {
    pub fn new(width: u32, height: u32, fill: Rgb) -> Self {
        let pixels = fill.0.repeat(width as usize * height as usize);
        FrameImage {
            width,
            height,
            pixels,
        }
    }

    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width as usize * height as usize * 3 {
            return Err(Error::Image(format!(
                "{} bytes do not form a {width}x{height} RGB image",
                pixels.len()
            )));
        }
        Ok(FrameImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        Rgb([self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]])
    }

    pub fn set(&mut self, x: u32, y: u32, c: Rgb) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.pixels[i..i + 3].copy_from_slice(&c.0);
    }

    /// Writes `c` at `(x, y)` when the pixel lies inside the frame.
    pub fn put(&mut self, x: i64, y: i64, c: Rgb) {
        if x >= 0 && y >= 0 && x < i64::from(self.width) && y < i64::from(self.height) {
            self.set(x as u32, y as u32, c);
        }
    }

    /// Coordinates of every pixel that differs from `other`.
    pub fn diff(&self, other: &FrameImage) -> Result<Vec<(u32, u32)>> {
        if self.dimensions() != other.dimensions() {
            return Err(Error::DimensionMismatch {
                expected: self.dimensions(),
                actual: other.dimensions(),
            });
        }
        let w = self.width as usize;
        Ok(self
            .pixels
            .chunks_exact(3)
            .zip(other.pixels.chunks_exact(3))
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| ((i % w) as u32, (i / w) as u32))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ImageFormat::Ppm => "ppm",
            ImageFormat::Png => "png",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "ppm" => Some(ImageFormat::Ppm),
            "png" => Some(ImageFormat::Png),
            _ => None,
        }
    }
}

/// `frame_000042.ppm` and friends.
pub fn frame_file_name(index: u32, format: ImageFormat) -> String {
    format!("frame_{index:06}.{}", format.extension())
}

/// Locates frame `index` in `dir`, preferring PNG when both exist.
pub fn find_frame(dir: &Path, index: u32) -> Option<(PathBuf, ImageFormat)> {
    [ImageFormat::Png, ImageFormat::Ppm]
        .into_iter()
        .map(|f| (dir.join(frame_file_name(index, f)), f))
        .find(|(p, _)| p.is_file())
}

pub fn decode_image(bytes: &[u8], format: ImageFormat) -> Result<FrameImage> {
    match format {
        ImageFormat::Ppm => decode_ppm(bytes),
        ImageFormat::Png => decode_png(bytes),
    }
}

pub fn encode_image(img: &FrameImage, format: ImageFormat) -> Result<Vec<u8>> {
    match format {
        ImageFormat::Ppm => Ok(encode_ppm(img)),
        ImageFormat::Png => encode_png(img),
    }
}

pub fn read_image(path: &Path) -> Result<FrameImage> {
    let format = ImageFormat::from_path(path)
        .ok_or_else(|| Error::Image(format!("unsupported image extension: {}", path.display())))?;
    decode_image(&std::fs::read(path)?, format)
}

pub fn write_image(path: &Path, img: &FrameImage) -> Result<()> {
    let format = ImageFormat::from_path(path)
        .ok_or_else(|| Error::Image(format!("unsupported image extension: {}", path.display())))?;
    std::fs::write(path, encode_image(img, format)?)?;
    Ok(())
}

/// Canonical binary PPM: `P6\n<w> <h>\n255\n` followed by raw RGB.
pub fn encode_ppm(img: &FrameImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Decodes binary PPM (P6), with header comments and any maxval up to 65535.
pub fn decode_ppm(bytes: &[u8]) -> Result<FrameImage> {
    let mut cur = PpmCursor { bytes, pos: 0 };
    if bytes.get(..2) != Some(b"P6") {
        return Err(Error::Image("not a binary PPM (missing P6 magic)".into()));
    }
    cur.pos = 2;
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Image("zero image dimension".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Image(format!("invalid maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::Image("truncated PPM header".into())),
    }

    let sample_bytes: usize = if maxval > 255 { 2 } else { 1 };
    let samples = (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| Error::Image("image too large".into()))?;
    let needed = samples
        .checked_mul(sample_bytes)
        .ok_or_else(|| Error::Image("image too large".into()))?;
    let data = &bytes[cur.pos..];
    if data.len() < needed {
        return Err(Error::Image(format!(
            "truncated raster: need {needed} bytes, have {}",
            data.len()
        )));
    }

    let pixels: Vec<u8> = if maxval == 255 {
        data[..needed].to_vec()
    } else {
        let scale = |v: u32| ((v.min(maxval) * 255 + maxval / 2) / maxval) as u8;
        if sample_bytes == 1 {
            data[..needed].iter().map(|&v| scale(v.into())).collect()
        } else {
            data[..needed]
                .chunks_exact(2)
                .map(|p| scale(u32::from(u16::from_be_bytes([p[0], p[1]]))))
                .collect()
        }
    };
    FrameImage::from_raw(width, height, pixels)
}

struct PpmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PpmCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, name: &str) -> Result<u32> {
        let start = self.pos;
        self.skip_space_and_comments();
        if self.pos == start {
            return Err(Error::Image(format!("expected whitespace before {name}")));
        }
        let digits_start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or_else(|| Error::Image(format!("{name} overflows")))?;
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(Error::Image(format!("expected {name}")));
        }
        Ok(value)
    }
}

/// Upper bound on decoded PNG size; generous for video frames.
const PNG_BYTE_LIMIT: usize = 256 << 20;

pub fn decode_png(bytes: &[u8]) -> Result<FrameImage> {
    let err = |e: png::DecodingError| Error::Image(format!("png: {e}"));
    let mut decoder = png::Decoder::new_with_limits(
        Cursor::new(bytes),
        png::Limits {
            bytes: PNG_BYTE_LIMIT,
        },
    );
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(err)?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Image("png: image too large".into()))?;
    // Deflate expands at most ~1032:1 and bit-depth expansion at most 8:1, so
    // a header claiming more than that is lying; refuse before allocating.
    let plausible = bytes.len().saturating_mul(1032 * 8).saturating_add(1 << 16);
    if size > plausible {
        return Err(Error::Image(
            "png: dimensions exceed what the data can hold".into(),
        ));
    }
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(err)?;
    buf.truncate(info.buffer_size());

    let n = info.width as usize * info.height as usize;
    let rgb: Vec<u8> = match info.color_type {
        png::ColorType::Rgb => buf,
        png::ColorType::Rgba => buf
            .chunks_exact(4)
            .flat_map(|p| [p[0], p[1], p[2]])
            .collect(),
        png::ColorType::Grayscale => buf.iter().flat_map(|&g| [g, g, g]).collect(),
        png::ColorType::GrayscaleAlpha => buf
            .chunks_exact(2)
            .flat_map(|p| [p[0], p[0], p[0]])
            .collect(),
        png::ColorType::Indexed => {
            return Err(Error::Image("png: palette was not expanded".into()));
        }
    };
    if rgb.len() != n * 3 {
        return Err(Error::Image("png: unexpected buffer size".into()));
    }
    FrameImage::from_raw(info.width, info.height, rgb)
}

pub fn encode_png(img: &FrameImage) -> Result<Vec<u8>> {
    let err = |e: png::EncodingError| Error::Image(format!("png: {e}"));
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width, img.height);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().map_err(err)?;
        writer.write_image_data(&img.pixels).map_err(err)?;
        writer.finish().map_err(err)?;
    }
    Ok(out)
}
