use crate::filters::{clamp_into, pad_row, separable};
use crate::imgcore::ImagePlane;

/// Mean over the `(2r + 1)^2` window around each pixel, mirrored borders.
///
/// Each pass uses prefix sums over the padded row, so the cost per pixel
/// does not depend on `radius`. `radius = 0` returns the input.
pub fn box_filter(i: &ImagePlane, radius: usize) -> ImagePlane {
    if radius == 0 || i.is_empty() {
        return i.clone();
    }
    let norm = (2 * radius + 1) as f64;
    let out = separable(i, |src, dst| {
        let mut padded = Vec::new();
        pad_row(src, radius, &mut padded);
        let mut prefix = Vec::with_capacity(padded.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for v in &padded {
            acc += v;
            prefix.push(acc);
        }
        for (x, d) in dst.iter_mut().enumerate() {
            *d = (prefix[x + 2 * radius + 1] - prefix[x]) / norm;
        }
    });
    clamp_into(out, i.min(), i.max())
}
