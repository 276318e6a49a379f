#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veda_core::{ColorImage, ColorSpace, ImagePlane};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_plane(rng: &mut ChaCha8Rng, w: usize, h: usize, lo: f64, hi: f64) -> ImagePlane {
    ImagePlane::from_fn(w, h, |_, _| rng.gen_range(lo..hi))
}

/// Plane of 8-bit levels divided by 255.
pub fn random_levels(rng: &mut ChaCha8Rng, w: usize, h: usize) -> ImagePlane {
    ImagePlane::from_fn(w, h, |_, _| rng.gen_range(0u8..=255) as f64 / 255.0)
}

pub fn random_rgb(rng: &mut ChaCha8Rng, w: usize, h: usize) -> ColorImage {
    let planes = [0, 1, 2].map(|_| random_plane(rng, w, h, 0.0, 1.0));
    ColorImage::new(planes, ColorSpace::Rgb).unwrap()
}

/// Index into `0..n` under symmetric reflection (`... 1 0 | 0 1 ...`).
pub fn mirror(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - 1 - m) as usize
    }
}

/// Mean over the `(2r+1)^2` window with mirrored borders, summed directly.
pub fn naive_box(p: &ImagePlane, r: usize) -> ImagePlane {
    let (w, h) = p.dims();
    let r = r as isize;
    ImagePlane::from_fn(w, h, |x, y| {
        let mut s = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                s += p.get(mirror(x as isize + dx, w), mirror(y as isize + dy, h));
            }
        }
        s / ((2 * r + 1) * (2 * r + 1)) as f64
    })
}

/// Normalized 1-D Gaussian taps of width `6 * ceil(sigma) + 1`.
pub fn gaussian_taps(sigma: f64) -> Vec<f64> {
    let r = 3 * sigma.ceil() as isize;
    let raw: Vec<f64> = (-r..=r)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// Direct 2-D convolution with the outer-product kernel and mirrored borders.
pub fn dense_gaussian(p: &ImagePlane, sigma: f64) -> ImagePlane {
    let taps = gaussian_taps(sigma);
    let r = (taps.len() / 2) as isize;
    let (w, h) = p.dims();
    ImagePlane::from_fn(w, h, |x, y| {
        let mut s = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                let k = taps[(dy + r) as usize] * taps[(dx + r) as usize];
                s += k * p.get(mirror(x as isize + dx, w), mirror(y as isize + dy, h));
            }
        }
        s
    })
}

/// Smooth illumination times a colored texture, quantized to 8 bits.
///
/// `seed` picks the illumination direction, the texture frequencies and the
/// tint so that different seeds give visibly different scenes.
pub fn synthetic_photo(seed: u64, w: usize, h: usize) -> ColorImage {
    let mut r = rng(seed);
    let (fx, fy) = (r.gen_range(0.05..0.4), r.gen_range(0.05..0.4));
    let angle: f64 = r.gen_range(0.0..std::f64::consts::TAU);
    let tint = [r.gen_range(0.6..1.0), r.gen_range(0.6..1.0), r.gen_range(0.6..1.0)];
    let mut noise = rng(seed ^ 0x5eed);
    let grain: Vec<f64> = (0..w * h).map(|_| noise.gen_range(-0.03..0.03)).collect();
    let planes = [0, 1, 2].map(|c| {
        ImagePlane::from_fn(w, h, |x, y| {
            let (u, v) = (x as f64 / w as f64, y as f64 / h as f64);
            let light = 0.08 + 0.9 * (0.5 + 0.5 * (angle.cos() * u + angle.sin() * v - 0.5)).clamp(0.0, 1.0);
            let texture = 0.7
                + 0.2 * (fx * x as f64 + c as f64).sin() * (fy * y as f64).cos()
                + grain[y * w + x];
            let v = (light * texture * tint[c]).clamp(0.0, 1.0);
            (v * 255.0).round() / 255.0
        })
    });
    ColorImage::new(planes, ColorSpace::Rgb).unwrap()
}
