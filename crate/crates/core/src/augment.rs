//! Deterministic image-space augmentation: width stretch, rotation,
//! perspective warp.
//!
//! All transforms use nearest-neighbor sampling so a given parameter set
//! produces the same bytes everywhere, and identity parameters are exact
//! no-ops. Batch parameters come from a counter-keyed generator, so variant
//! (i, v) is the same no matter how many workers process the batch or in
//! which order.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::render::{EncodedImage, Rgb};
use crate::rng::DetRng;

/// Corner order: top-left, top-right, bottom-right, bottom-left, in pixel
/// coordinates.
pub type Corners = [(f64, f64); 4];

/// Parameter ranges for [`augment_batch`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct AugmentSpec {
    pub width_stretch_range: (f64, f64),
    pub rotation_range_deg: (f64, f64),
    /// Max corner displacement as a fraction of min(H, W).
    pub perspective_jitter: f64,
    pub count_per_image: usize,
    pub seed: u64,
}

impl Default for AugmentSpec {
    fn default() -> Self {
        AugmentSpec {
            width_stretch_range: (0.8, 1.2),
            rotation_range_deg: (-10.0, 10.0),
            perspective_jitter: 0.05,
            count_per_image: 0,
            seed: 0,
        }
    }
}

impl AugmentSpec {
    pub fn validate(&self) -> Result<()> {
        let (slo, shi) = self.width_stretch_range;
        if slo.is_nan() || shi.is_nan() || slo > shi {
            return Err(Error::InvalidAugmentSpec("stretch range lo > hi"));
        }
        if slo < 0.25 || shi > 4.0 {
            return Err(Error::InvalidAugmentSpec("stretch range outside [0.25, 4]"));
        }
        let (rlo, rhi) = self.rotation_range_deg;
        if rlo.is_nan() || rhi.is_nan() || rlo > rhi {
            return Err(Error::InvalidAugmentSpec("rotation range lo > hi"));
        }
        if rlo < -45.0 || rhi > 45.0 {
            return Err(Error::InvalidAugmentSpec("rotation range outside [-45, 45]"));
        }
        if !(0.0..=0.25).contains(&self.perspective_jitter) {
            return Err(Error::InvalidAugmentSpec("perspective jitter outside [0, 0.25]"));
        }
        Ok(())
    }
}

/// Rescale horizontally by `factor` (nearest neighbor), then center-crop or
/// center-pad with `background` back to the original width.
pub fn width_stretch(image: &EncodedImage, factor: f64, background: Rgb) -> Result<EncodedImage> {
    if !(0.25..=4.0).contains(&factor) {
        return Err(Error::InvalidStretchFactor(factor));
    }
    let (w, h) = (image.width(), image.height());
    let stretched_w = (math::round(w as f64 * factor) as usize).max(1);
    if stretched_w == w {
        return Ok(image.clone());
    }
    let offset = stretched_w as i64 - w as i64;
    let offset = offset.div_euclid(2);
    let mut out = EncodedImage::filled(w, h, background);
    for y in 0..h {
        for x in 0..w {
            let sx = x as i64 + offset;
            if sx < 0 || sx >= stretched_w as i64 {
                continue;
            }
            // Pixel-center nearest neighbor, in exact integer arithmetic;
            // sx < stretched_w keeps src below w.
            let src = ((2 * sx as usize + 1) * w) / (2 * stretched_w);
            out.set_pixel(x, y, image.pixel(src, y));
        }
    }
    Ok(out)
}

/// Rotate about the image center; positive angles turn the content
/// counter-clockwise. Nearest-neighbor sampling, `background` fill,
/// dimensions unchanged. Meant for small tilts but accepts any angle.
pub fn rotate(image: &EncodedImage, angle_deg: f64, background: Rgb) -> EncodedImage {
    let (w, h) = (image.width(), image.height());
    let theta = angle_deg * core::f64::consts::PI / 180.0;
    let (sin, cos) = (math::sin(theta), math::cos(theta));
    let cx = (w - 1) as f64 / 2.0;
    let cy = (h - 1) as f64 / 2.0;
    let mut out = EncodedImage::filled(w, h, background);
    for y in 0..h {
        let dy = y as f64 - cy;
        for x in 0..w {
            let dx = x as f64 - cx;
            let sx = math::round(cx + dx * cos - dy * sin);
            let sy = math::round(cy + dx * sin + dy * cos);
            if sx >= 0.0 && sy >= 0.0 && (sx as usize) < w && (sy as usize) < h {
                out.set_pixel(x, y, image.pixel(sx as usize, sy as usize));
            }
        }
    }
    out
}

/// Projective map from the unit square onto a quadrilateral.
///
/// Closed-form square-to-quad construction; the affine branch keeps
/// axis-aligned targets (identity included) numerically exact.
struct SquareToQuad {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    f: f64,
    g: f64,
    h: f64,
}

impl SquareToQuad {
    fn new(quad: &Corners) -> Self {
        let [(x0, y0), (x1, y1), (x2, y2), (x3, y3)] = *quad;
        let sx = x0 - x1 + x2 - x3;
        let sy = y0 - y1 + y2 - y3;
        if sx == 0.0 && sy == 0.0 {
            return SquareToQuad {
                a: x1 - x0,
                b: x3 - x0,
                c: x0,
                d: y1 - y0,
                e: y3 - y0,
                f: y0,
                g: 0.0,
                h: 0.0,
            };
        }
        let dx1 = x1 - x2;
        let dx2 = x3 - x2;
        let dy1 = y1 - y2;
        let dy2 = y3 - y2;
        let den = dx1 * dy2 - dx2 * dy1;
        let g = (sx * dy2 - sy * dx2) / den;
        let h = (dx1 * sy - dy1 * sx) / den;
        SquareToQuad {
            a: x1 - x0 + g * x1,
            b: x3 - x0 + h * x3,
            c: x0,
            d: y1 - y0 + g * y1,
            e: y3 - y0 + h * y3,
            f: y0,
            g,
            h,
        }
    }

    fn map(&self, u: f64, v: f64) -> (f64, f64) {
        let den = self.g * u + self.h * v + 1.0;
        (
            (self.a * u + self.b * v + self.c) / den,
            (self.d * u + self.e * v + self.f) / den,
        )
    }
}

/// The undisplaced corner positions of a `w` x `h` frame.
pub fn identity_corners(width: usize, height: usize) -> Corners {
    let (xm, ym) = ((width - 1) as f64, (height - 1) as f64);
    [(0.0, 0.0), (xm, 0.0), (xm, ym), (0.0, ym)]
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn validate_corners(corners: &Corners, width: usize, height: usize) -> Result<()> {
    let (xm, ym) = ((width - 1) as f64, (height - 1) as f64);
    for &(x, y) in corners {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::DegenerateCorners);
        }
        if x < -0.25 * xm || x > 1.25 * xm || y < -0.25 * ym || y > 1.25 * ym {
            return Err(Error::CornersOutOfFrame);
        }
    }
    // Strictly convex with consistent winding; collinear corners fail here.
    let mut sign = 0.0f64;
    for i in 0..4 {
        let z = cross(corners[i], corners[(i + 1) % 4], corners[(i + 2) % 4]);
        if z == 0.0 {
            return Err(Error::DegenerateCorners);
        }
        if sign == 0.0 {
            sign = z;
        } else if (z > 0.0) != (sign > 0.0) {
            return Err(Error::DegenerateCorners);
        }
    }
    Ok(())
}

/// Warp so the quadrilateral `corners` fills the frame. For every output
/// pixel the inverse homography picks the nearest input pixel; uncovered
/// output stays `background`.
pub fn perspective_warp(
    image: &EncodedImage,
    corners: &Corners,
    background: Rgb,
) -> Result<EncodedImage> {
    let (w, h) = (image.width(), image.height());
    validate_corners(corners, w, h)?;
    let map = SquareToQuad::new(corners);
    let (xm, ym) = ((w - 1) as f64, (h - 1) as f64);
    let mut out = EncodedImage::filled(w, h, background);
    for y in 0..h {
        let v = y as f64 / ym;
        for x in 0..w {
            let u = x as f64 / xm;
            let (sx, sy) = map.map(u, v);
            if !(sx.is_finite() && sy.is_finite()) {
                continue;
            }
            let (sx, sy) = (math::round(sx), math::round(sy));
            if sx >= 0.0 && sy >= 0.0 && (sx as usize) < w && (sy as usize) < h {
                out.set_pixel(x, y, image.pixel(sx as usize, sy as usize));
            }
        }
    }
    Ok(out)
}

/// Parameters drawn for one augmented variant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AugmentParams {
    pub stretch_factor: f64,
    pub rotation_deg: f64,
    pub corners: Corners,
}

/// The parameters variant `(image_index, variant_index)` of a batch keyed
/// by `spec.seed` will use. Pure function of its arguments.
pub fn variant_params(
    spec: &AugmentSpec,
    width: usize,
    height: usize,
    image_index: u64,
    variant_index: u64,
) -> Result<AugmentParams> {
    spec.validate()?;
    let mut rng = DetRng::from_key(&[spec.seed, image_index, variant_index]);
    let (slo, shi) = spec.width_stretch_range;
    let stretch_factor = rng.uniform(slo, shi);
    let (rlo, rhi) = spec.rotation_range_deg;
    let rotation_deg = rng.uniform(rlo, rhi);
    let reach = spec.perspective_jitter * width.min(height) as f64;
    let mut corners = identity_corners(width, height);
    for corner in &mut corners {
        corner.0 += rng.uniform(-reach, reach);
        corner.1 += rng.uniform(-reach, reach);
    }
    Ok(AugmentParams {
        stretch_factor,
        rotation_deg,
        corners,
    })
}

/// Apply one drawn parameter set: stretch, then rotate, then warp.
pub fn apply_params(
    image: &EncodedImage,
    params: &AugmentParams,
    background: Rgb,
) -> Result<EncodedImage> {
    let stretched = width_stretch(image, params.stretch_factor, background)?;
    let rotated = rotate(&stretched, params.rotation_deg, background);
    perspective_warp(&rotated, &params.corners, background)
}

/// One specific variant of one image; `augment_batch` is a loop over this.
pub fn augment_one(
    image: &EncodedImage,
    spec: &AugmentSpec,
    image_index: u64,
    variant_index: u64,
    background: Rgb,
) -> Result<EncodedImage> {
    let params = variant_params(spec, image.width(), image.height(), image_index, variant_index)?;
    apply_params(image, &params, background)
}

/// `count_per_image` variants per input, image-major order. Output depends
/// only on the inputs and the spec.
pub fn augment_batch(
    images: &[EncodedImage],
    spec: &AugmentSpec,
    background: Rgb,
) -> Result<Vec<EncodedImage>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(images.len() * spec.count_per_image);
    for (i, image) in images.iter().enumerate() {
        for v in 0..spec.count_per_image {
            out.push(augment_one(image, spec, i as u64, v as u64, background)?);
        }
    }
    Ok(out)
}
