use crate::error::{Error, Result};
use crate::imgcore::ImagePlane;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorSpace {
    Rgb,
    Hsv,
}

/// Three equally sized planes tagged with their color space.
///
/// RGB samples live in `[0, 1]`. HSV stores hue as a fraction of a turn in
/// `[0, 1)`, saturation and value in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    planes: [ImagePlane; 3],
    space: ColorSpace,
}

impl ColorImage {
    pub fn new(planes: [ImagePlane; 3], space: ColorSpace) -> Result<Self> {
        let dims = planes[0].dims();
        for p in &planes[1..] {
            if p.dims() != dims {
                return Err(Error::dims("ColorImage::new", dims, p.dims()));
            }
        }
        for (c, p) in planes.iter().enumerate() {
            let hue = space == ColorSpace::Hsv && c == 0;
            if let Some(idx) = p
                .data()
                .iter()
                .position(|&v| !(0.0..=1.0).contains(&v) || (hue && v >= 1.0))
            {
                return Err(Error::Domain {
                    x: idx % dims.0.max(1),
                    y: idx / dims.0.max(1),
                    reason: format!("channel {c} sample {} out of range", p.data()[idx]),
                });
            }
        }
        Ok(Self { planes, space })
    }

    /// Gray image: the plane is replicated into all three RGB channels.
    pub fn from_gray(plane: ImagePlane) -> Result<Self> {
        Self::new([plane.clone(), plane.clone(), plane], ColorSpace::Rgb)
    }

    /// Interleaved 8-bit RGB buffer.
    pub fn from_rgb8(width: usize, height: usize, rgb: &[u8]) -> Result<Self> {
        let n = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3).map(|_| n))
            .ok_or_else(|| Error::Usage(format!("image dimensions {width}x{height} overflow")))?;
        if rgb.len() != n * 3 {
            return Err(Error::Usage(format!(
                "rgb8 buffer has {} bytes, expected {}",
                rgb.len(),
                n * 3
            )));
        }
        let planes = [0, 1, 2].map(|c| {
            ImagePlane::from_raw(
                width,
                height,
                rgb.chunks_exact(3).map(|px| px[c] as f64 / 255.0).collect(),
            )
        });
        Ok(Self {
            planes,
            space: ColorSpace::Rgb,
        })
    }

    /// Quantizes to interleaved 8-bit samples (round half up).
    pub fn to_rgb8(&self) -> Vec<u8> {
        let n = self.width() * self.height();
        let mut out = Vec::with_capacity(n * 3);
        for i in 0..n {
            for p in &self.planes {
                out.push(quantize(p.data()[i]));
            }
        }
        out
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.planes[0].dims()
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn planes(&self) -> &[ImagePlane; 3] {
        &self.planes
    }

    pub fn plane(&self, c: usize) -> &ImagePlane {
        &self.planes[c]
    }

    pub fn into_planes(self) -> [ImagePlane; 3] {
        self.planes
    }

    /// True when all three channels are bitwise equal.
    pub fn is_gray(&self) -> bool {
        self.space == ColorSpace::Rgb
            && self.planes[0] == self.planes[1]
            && self.planes[1] == self.planes[2]
    }

    /// Swaps in a new value channel for an HSV image, keeping H and S.
    pub fn with_value(&self, value: ImagePlane) -> Result<Self> {
        self.expect_space(ColorSpace::Hsv, "with_value")?;
        let [h, s, _] = self.planes.clone();
        Self::new([h, s, value], ColorSpace::Hsv)
    }

    fn expect_space(&self, space: ColorSpace, what: &str) -> Result<()> {
        if self.space != space {
            return Err(Error::Usage(format!(
                "{what} expects a {space:?} image, got {:?}",
                self.space
            )));
        }
        Ok(())
    }
}

pub(crate) fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Hexcone RGB to HSV; `V = max(R, G, B)`.
pub fn rgb_to_hsv(img: &ColorImage) -> Result<ColorImage> {
    img.expect_space(ColorSpace::Rgb, "rgb_to_hsv")?;
    let (w, h) = img.dims();
    let n = w * h;
    let [r, g, b] = img.planes();
    let mut hue = Vec::with_capacity(n);
    let mut sat = Vec::with_capacity(n);
    let mut val = Vec::with_capacity(n);
    for i in 0..n {
        let (hh, ss, vv) = rgb_to_hsv_pixel(r.data()[i], g.data()[i], b.data()[i]);
        hue.push(hh);
        sat.push(ss);
        val.push(vv);
    }
    Ok(ColorImage {
        planes: [
            ImagePlane::from_raw(w, h, hue),
            ImagePlane::from_raw(w, h, sat),
            ImagePlane::from_raw(w, h, val),
        ],
        space: ColorSpace::Hsv,
    })
}

/// Inverse hexcone mapping; output clamped to `[0, 1]`.
pub fn hsv_to_rgb(img: &ColorImage) -> Result<ColorImage> {
    img.expect_space(ColorSpace::Hsv, "hsv_to_rgb")?;
    let (w, h) = img.dims();
    let n = w * h;
    let [hue, sat, val] = img.planes();
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let (rr, gg, bb) = hsv_to_rgb_pixel(hue.data()[i], sat.data()[i], val.data()[i]);
        r.push(rr.clamp(0.0, 1.0));
        g.push(gg.clamp(0.0, 1.0));
        b.push(bb.clamp(0.0, 1.0));
    }
    Ok(ColorImage {
        planes: [
            ImagePlane::from_raw(w, h, r),
            ImagePlane::from_raw(w, h, g),
            ImagePlane::from_raw(w, h, b),
        ],
        space: ColorSpace::Rgb,
    })
}

pub fn rgb_to_hsv_pixel(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let chroma = max - min;
    let s = if max > 0.0 { chroma / max } else { 0.0 };
    if chroma == 0.0 {
        return (0.0, s, max);
    }
    let sector = if max == r {
        ((g - b) / chroma).rem_euclid(6.0)
    } else if max == g {
        (b - r) / chroma + 2.0
    } else {
        (r - g) / chroma + 4.0
    };
    let mut h = sector / 6.0;
    if h >= 1.0 {
        h -= 1.0;
    }
    (h, s, max)
}

pub fn hsv_to_rgb_pixel(h: f64, s: f64, v: f64) -> (f64, f64, f64) {
    if s == 0.0 {
        return (v, v, v);
    }
    let h6 = h.rem_euclid(1.0) * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    match sector as i64 % 6 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(r: f64, g: f64, b: f64) -> ColorImage {
        let p = |v| ImagePlane::filled(1, 1, v);
        ColorImage::new([p(r), p(g), p(b)], ColorSpace::Rgb).unwrap()
    }

    #[test]
    fn gray_and_red() {
        assert_eq!(rgb_to_hsv_pixel(0.5, 0.5, 0.5), (0.0, 0.0, 0.5));
        assert_eq!(rgb_to_hsv_pixel(1.0, 0.0, 0.0), (0.0, 1.0, 1.0));
        assert_eq!(hsv_to_rgb_pixel(0.0, 0.0, 0.3), (0.3, 0.3, 0.3));
    }

    #[test]
    fn wrong_tag_is_usage_error() {
        let img = single(0.1, 0.2, 0.3);
        assert!(matches!(hsv_to_rgb(&img), Err(Error::Usage(_))));
        let hsv = rgb_to_hsv(&img).unwrap();
        assert!(matches!(rgb_to_hsv(&hsv), Err(Error::Usage(_))));
        assert!(matches!(img.with_value(ImagePlane::zeros(1, 1)), Err(Error::Usage(_))));
    }

    #[test]
    fn hue_stays_in_unit_interval() {
        // magenta-ish colors sit right below a full turn
        let (h, _, _) = rgb_to_hsv_pixel(1.0, 0.0, 1e-17);
        assert!((0.0..1.0).contains(&h));
        let (h, _, _) = rgb_to_hsv_pixel(1.0, 0.0, 0.5);
        assert!((0.0..1.0).contains(&h));
    }

    #[test]
    fn eight_bit_lattice_round_trip() {
        // every 5th level on each axis: 52^3 colors
        let mut worst: f64 = 0.0;
        for r in (0..=255).step_by(5) {
            for g in (0..=255).step_by(5) {
                for b in (0..=255).step_by(5) {
                    let (r, g, b) = (r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
                    let (h, s, v) = rgb_to_hsv_pixel(r, g, b);
                    let (r2, g2, b2) = hsv_to_rgb_pixel(h, s, v);
                    worst = worst.max((r - r2).abs()).max((g - g2).abs()).max((b - b2).abs());
                }
            }
        }
        assert!(worst < 1e-9, "worst {worst}");
    }

    #[test]
    fn value_swap_keeps_hue_and_saturation() {
        let img = single(0.6, 0.3, 0.1);
        let hsv = rgb_to_hsv(&img).unwrap();
        let brighter = hsv.with_value(ImagePlane::filled(1, 1, 0.9)).unwrap();
        let back = rgb_to_hsv(&hsv_to_rgb(&brighter).unwrap()).unwrap();
        assert!((back.plane(0).get(0, 0) - hsv.plane(0).get(0, 0)).abs() < 1e-9);
        assert!((back.plane(1).get(0, 0) - hsv.plane(1).get(0, 0)).abs() < 1e-9);
        assert!((back.plane(2).get(0, 0) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn rgb8_round_trip() {
        let bytes: Vec<u8> = (0..=255u8).cycle().take(4 * 3 * 3).collect();
        let img = ColorImage::from_rgb8(4, 3, &bytes).unwrap();
        assert_eq!(img.to_rgb8(), bytes);
    }
}
