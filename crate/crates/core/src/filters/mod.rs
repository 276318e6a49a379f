//! Spatial filters producing the surround image: separable Gaussian, box,
//! guided and weighted guided filters.
//!
//! All filters reflect the image at its borders (`... 2 1 0 | 0 1 2 ...`),
//! which also covers windows wider than the image.

mod boxf;
mod gaussian;
mod guided;
mod rank;

use std::fmt;
use std::str::FromStr;

pub use boxf::box_filter;
pub use gaussian::{gaussian_filter, GaussianSpec};
pub use guided::{guided_filter, weighted_guided_filter, wgif_edge_weights, WgifSpec};
pub use rank::{local_max, local_min};

use crate::error::{Error, Result};
use crate::imgcore::ImagePlane;

/// Regularizer used for WGIF surrounds on log-domain planes.
pub const SURROUND_WGIF_EPSILON: f64 = 0.01;

/// Filter used to build the surround image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurroundKind {
    Gaussian,
    #[default]
    Wgif,
}

impl fmt::Display for SurroundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurroundKind::Gaussian => "gaussian",
            SurroundKind::Wgif => "wgif",
        })
    }
}

impl FromStr for SurroundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(SurroundKind::Gaussian),
            "wgif" => Ok(SurroundKind::Wgif),
            other => Err(Error::InvalidParameter(format!(
                "unknown surround kind {other:?} (expected gaussian or wgif)"
            ))),
        }
    }
}

/// Half-width `3 * ceil(sigma)` shared by the Gaussian support and the
/// WGIF window at the same scale.
pub fn scale_radius(sigma: f64) -> usize {
    3 * sigma.ceil() as usize
}

/// Builds the surround image `S_sigma` of a log-domain plane.
///
/// The WGIF variant is self-guided with radius `3 * ceil(sigma)` and
/// `epsilon = 0.01`.
pub fn make_surround(i: &ImagePlane, sigma: f64, kind: SurroundKind) -> Result<ImagePlane> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "surround sigma must be positive, got {sigma}"
        )));
    }
    match kind {
        SurroundKind::Gaussian => Ok(gaussian_filter(i, &GaussianSpec::new(sigma)?)),
        SurroundKind::Wgif => {
            let spec = WgifSpec::new(scale_radius(sigma), SURROUND_WGIF_EPSILON)?;
            weighted_guided_filter(i, i, &spec)
        }
    }
}

/// Symmetric reflection of a possibly out-of-range index into `0..n`.
#[inline]
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    debug_assert!(n > 0);
    let period = 2 * n as isize;
    let m = i.rem_euclid(period) as usize;
    if m < n {
        m
    } else {
        2 * n - 1 - m
    }
}

/// Copies `row` into `buf` with `radius` reflected samples on each side.
pub(crate) fn pad_row(row: &[f64], radius: usize, buf: &mut Vec<f64>) {
    let n = row.len();
    buf.clear();
    buf.extend((0..n + 2 * radius).map(|j| row[reflect(j as isize - radius as isize, n)]));
}

/// Applies a row operation, then the same operation to the columns by way
/// of a transpose.
pub(crate) fn separable(
    plane: &ImagePlane,
    row_op: impl Fn(&[f64], &mut [f64]) + Sync,
) -> ImagePlane {
    let horizontal = map_rows(plane, &row_op);
    map_rows(&horizontal.transposed(), &row_op).transposed()
}

fn map_rows(plane: &ImagePlane, row_op: &(impl Fn(&[f64], &mut [f64]) + Sync)) -> ImagePlane {
    use rayon::prelude::*;
    let (w, h) = plane.dims();
    let mut out = vec![0.0; w * h];
    if w > 0 {
        out.par_chunks_mut(w)
            .enumerate()
            .for_each(|(y, dst)| row_op(plane.row(y), dst));
    }
    ImagePlane::from_raw(w, h, out)
}

/// Clamps every sample into `[lo, hi]` (rounding guard for convex filters).
pub(crate) fn clamp_into(plane: ImagePlane, lo: f64, hi: f64) -> ImagePlane {
    let (w, h) = plane.dims();
    let data = plane.into_data().into_iter().map(|v| v.clamp(lo, hi)).collect();
    ImagePlane::from_raw(w, h, data)
}
