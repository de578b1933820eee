//! Color assignment and deterministic rasterization of boxes and trails.

mod image;
mod overlay;
mod palette;
mod raster;

pub use image::{
    decode_image, decode_png, decode_ppm, encode_image, encode_png, encode_ppm, find_frame,
    frame_file_name, read_image, write_image, FrameImage, ImageFormat, Rgb,
};
pub use overlay::{
    assign_colors, build_overlays, overlay_footprint, render_frame, ColorAssignment, OverlayItem,
    OverlaySet, RenderConfig,
};
pub use palette::{
    srgb_to_lab, Palette, PaletteColor, DEFAULT_PALETTE, MIN_DELTA_E, PALETTE_VERSION,
};
pub use raster::{
    draw_line, draw_polyline, draw_rect_outline, line_pixels, pen_origin, stamp, Canvas,
};
