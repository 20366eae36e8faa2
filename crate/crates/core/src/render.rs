//! Rasterize a signal matrix into an RGB image.
//!
//! Time runs left to right across the width, signal values map to rows,
//! and every signal gets its own hue sampled evenly in HSV space. Along
//! each polyline the color fades from white at the first sample to the
//! signal's full hue at the last, so the image carries local temporal
//! direction as well as position.
//!
//! Rasterization is plain integer Bresenham with no anti-aliasing: the
//! same input and config produce the same bytes on every platform.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::signal::{matrix_value_range, RangeMode, SignalMatrix};

/// 8-bit RGB triple.
pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

/// Signals are drawn in input order; later signals overdraw earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DrawOrder {
    #[default]
    InputOrder,
}

/// Rendering parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct EncodingConfig {
    pub height: usize,
    pub width: usize,
    pub line_width: usize,
    /// Black by default: white is reserved for the start of the temporal
    /// gradient, so early samples stay visible.
    pub background: Rgb,
    pub saturation: f64,
    pub value: f64,
    pub range_mode: RangeMode,
    pub draw_order: DrawOrder,
    /// When false, polylines are drawn in the flat base hue.
    pub gradient: bool,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        EncodingConfig {
            height: 256,
            width: 256,
            line_width: 1,
            background: BLACK,
            saturation: 1.0,
            value: 1.0,
            range_mode: RangeMode::PerSequence,
            draw_order: DrawOrder::InputOrder,
            gradient: true,
        }
    }
}

impl EncodingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.height < 2 || self.width < 2 {
            return Err(Error::ImageTooSmall {
                width: self.width,
                height: self.height,
            });
        }
        if self.line_width == 0 {
            return Err(Error::InvalidEncodingConfig("line width must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.saturation) {
            return Err(Error::InvalidEncodingConfig("saturation outside [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.value) {
            return Err(Error::InvalidEncodingConfig("value outside [0, 1]"));
        }
        if let RangeMode::Fixed { min, max } = self.range_mode {
            if min > max {
                return Err(Error::InvalidFixedRange { min, max });
            }
        }
        Ok(())
    }
}

/// An H x W raster of 8-bit RGB pixels, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl EncodedImage {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        let mut data = alloc::vec![0u8; width * height * 3];
        if color != BLACK {
            for px in data.chunks_exact_mut(3) {
                px.copy_from_slice(&color);
            }
        }
        EncodedImage { width, height, data }
    }

    /// Wrap an existing row-major RGB buffer of `width * height * 3` bytes.
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height * 3 {
            return Err(Error::PixelBufferMismatch {
                width,
                height,
                got: data.len(),
            });
        }
        Ok(EncodedImage { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, color: Rgb) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&color);
    }

    /// Raw RGB bytes, row-major.
    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }
}

/// Evenly spaced hues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    colors: Vec<Rgb>,
}

impl Palette {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, signal: usize) -> Rgb {
        self.colors[signal]
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }
}

fn hsv_to_rgb(hue_deg: f64, saturation: f64, value: f64) -> Rgb {
    let c = value * saturation;
    let hp = hue_deg / 60.0;
    let sector = math::floor(hp) as i32 % 6;
    let x = c * (1.0 - math::abs(hp % 2.0 - 1.0));
    let m = value - c;
    let (r, g, b) = match sector {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [
        math::round((r + m) * 255.0) as u8,
        math::round((g + m) * 255.0) as u8,
        math::round((b + m) * 255.0) as u8,
    ]
}

/// `n` hues at `j * 360/n` degrees, converted to RGB at the given
/// saturation and value and rounded half-up to 8 bits.
pub fn sample_palette(n: usize, saturation: f64, value: f64) -> Result<Palette> {
    if n == 0 || n > 4096 {
        return Err(Error::InvalidPaletteSize(n));
    }
    if !(0.0..=1.0).contains(&saturation) {
        return Err(Error::InvalidEncodingConfig("saturation outside [0, 1]"));
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidEncodingConfig("value outside [0, 1]"));
    }
    let colors = (0..n)
        .map(|j| hsv_to_rgb(j as f64 * 360.0 / n as f64, saturation, value))
        .collect();
    Ok(Palette { colors })
}

/// Color of sample `t` in a sequence of length `m`: white at t = 0 fading
/// linearly to `base` at t = m-1. A single-sample sequence gets `base`.
pub fn temporal_color(base: Rgb, t: usize, m: usize) -> Result<Rgb> {
    if t >= m {
        return Err(Error::SampleOutOfRange { index: t, len: m });
    }
    let u = if m == 1 { 1.0 } else { t as f64 / (m - 1) as f64 };
    let mut out = [0u8; 3];
    for (o, &b) in out.iter_mut().zip(base.iter()) {
        *o = math::round(255.0 + u * (b as f64 - 255.0)) as u8;
    }
    Ok(out)
}

/// Map a value to an image row: `min` lands on the bottom row (H-1), `max`
/// on the top row (0). A degenerate range centers everything; values
/// outside a fixed range clamp to the edge rows.
pub fn value_to_row(v: f64, range: (f64, f64), height: usize) -> usize {
    let (min, max) = range;
    if max <= min {
        return (height - 1) / 2;
    }
    let row = math::round((height - 1) as f64 * (max - v) / (max - min));
    if row <= 0.0 {
        0
    } else if row >= (height - 1) as f64 {
        height - 1
    } else {
        row as usize
    }
}

/// Map sample index `t` of an M-sample signal to an image column.
fn sample_to_col(t: usize, m: usize, width: usize) -> usize {
    if m <= 1 {
        return 0;
    }
    math::round(t as f64 * (width - 1) as f64 / (m - 1) as f64) as usize
}

struct Canvas {
    img: EncodedImage,
    brush: Vec<(i64, i64)>,
}

impl Canvas {
    fn new(img: EncodedImage, line_width: usize) -> Self {
        let lw = line_width as i64;
        let start = -(lw - 1) / 2;
        let mut brush = Vec::with_capacity(line_width * line_width);
        for dy in 0..lw {
            for dx in 0..lw {
                brush.push((start + dx, start + dy));
            }
        }
        Canvas { img, brush }
    }

    fn stamp(&mut self, x: i64, y: i64, color: Rgb) {
        for &(dx, dy) in &self.brush {
            let (px, py) = (x + dx, y + dy);
            if px >= 0 && py >= 0 && (px as usize) < self.img.width && (py as usize) < self.img.height {
                self.img.set_pixel(px as usize, py as usize, color);
            }
        }
    }

    /// Bresenham line, both endpoints included.
    fn line(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, color: Rgb) {
        let (mut x, mut y) = (x0, y0);
        let dx = (x1 - x0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let dy = -(y1 - y0).abs();
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        loop {
            self.stamp(x, y, color);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }
}

/// Render a matrix to an image.
///
/// Each signal is drawn as a polyline in input order, so later signals
/// overdraw earlier ones where they overlap. Zeroed (reduced) signals come
/// out as flat lines that still carry their identity color.
pub fn encode_image(matrix: &SignalMatrix, config: &EncodingConfig) -> Result<EncodedImage> {
    config.validate()?;
    let range = matrix_value_range(matrix, config.range_mode)?;
    let palette = sample_palette(matrix.signal_count(), config.saturation, config.value)?;
    let (w, h) = (config.width, config.height);
    let m = matrix.sample_count();
    let mut canvas = Canvas::new(
        EncodedImage::filled(w, h, config.background),
        config.line_width,
    );

    let color_at = |base: Rgb, t: usize| -> Rgb {
        if config.gradient {
            // t < m by construction.
            temporal_color(base, t, m).unwrap()
        } else {
            base
        }
    };

    for (j, row) in matrix.signals().enumerate() {
        let base = palette.color(j);
        let point = |t: usize| -> (i64, i64) {
            let x = sample_to_col(t, m, w) as i64;
            let y = value_to_row(row[t], range, h) as i64;
            (x, y)
        };
        // Walk the polyline forward in time: segment t carries sample t's
        // color, and each sample pixel ends up with its own color, so the
        // last sample lands exactly on the base hue.
        let (x0, y0) = point(0);
        canvas.stamp(x0, y0, color_at(base, 0));
        for t in 0..m.saturating_sub(1) {
            let (ax, ay) = point(t);
            let (bx, by) = point(t + 1);
            canvas.line(ax, ay, bx, by, color_at(base, t));
            canvas.stamp(bx, by, color_at(base, t + 1));
        }
    }
    Ok(canvas.img)
}
