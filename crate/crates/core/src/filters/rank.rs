use crate::filters::{pad_row, separable};
use crate::imgcore::ImagePlane;

/// Maximum over the `(2r + 1)^2` window, mirrored borders.
pub fn local_max(i: &ImagePlane, radius: usize) -> ImagePlane {
    extremum(i, radius, f64::max)
}

/// Minimum over the `(2r + 1)^2` window, mirrored borders.
pub fn local_min(i: &ImagePlane, radius: usize) -> ImagePlane {
    extremum(i, radius, f64::min)
}

fn extremum(i: &ImagePlane, radius: usize, pick: fn(f64, f64) -> f64) -> ImagePlane {
    if radius == 0 || i.is_empty() {
        return i.clone();
    }
    separable(i, |src, dst| van_herk(src, radius, pick, dst))
}

/// van Herk / Gil-Werman running extremum: block-wise prefix and suffix
/// scans give every window in three comparisons per sample.
fn van_herk(src: &[f64], radius: usize, pick: fn(f64, f64) -> f64, dst: &mut [f64]) {
    let k = 2 * radius + 1;
    let mut padded = Vec::new();
    pad_row(src, radius, &mut padded);
    let len = padded.len();
    let mut forward = padded.clone();
    let mut backward = padded.clone();
    for j in 1..len {
        if j % k != 0 {
            forward[j] = pick(forward[j - 1], padded[j]);
        }
    }
    for j in (0..len - 1).rev() {
        if (j + 1) % k != 0 {
            backward[j] = pick(backward[j + 1], padded[j]);
        }
    }
    for (x, d) in dst.iter_mut().enumerate() {
        *d = pick(backward[x], forward[x + k - 1]);
    }
}
