//! Alternative ratio-type contrast definitions that can stand in for the
//! shunting model. Each one yields a [`Decomposition`] with the same
//! `input = contrast + residual` contract.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filters::{box_filter, local_max, local_min};
use crate::imgcore::ImagePlane;
use crate::retinal::{decompose, Decomposition, ShuntingParams};

/// Smallest surround value used as a Weber denominator.
pub const WEBER_DENOMINATOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContrastModel {
    #[default]
    Shunting,
    Weber,
    Michelson,
    Rms,
}

impl fmt::Display for ContrastModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContrastModel::Shunting => "shunting",
            ContrastModel::Weber => "weber",
            ContrastModel::Michelson => "michelson",
            ContrastModel::Rms => "rms",
        })
    }
}

impl FromStr for ContrastModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shunting" => Ok(ContrastModel::Shunting),
            "weber" => Ok(ContrastModel::Weber),
            "michelson" => Ok(ContrastModel::Michelson),
            "rms" => Ok(ContrastModel::Rms),
            other => Err(Error::InvalidParameter(format!(
                "unknown contrast model {other:?} (expected shunting, weber, michelson or rms)"
            ))),
        }
    }
}

/// Weber contrast `(I - S) / S`.
///
/// A zero surround is replaced by [`WEBER_DENOMINATOR_FLOOR`]; a negative one
/// is a domain error.
pub fn weber_contrast(i: &ImagePlane, s: &ImagePlane) -> Result<ImagePlane> {
    i.ensure_same_dims(s, "weber_contrast")?;
    let w = i.width().max(1);
    if let Some(k) = s.data().iter().position(|&v| v < 0.0) {
        return Err(Error::Domain {
            x: k % w,
            y: k / w,
            reason: format!("negative surround {} in Weber contrast", s.data()[k]),
        });
    }
    i.zip_map(s, |iv, sv| (iv - sv) / sv.max(WEBER_DENOMINATOR_FLOOR))
}

/// Michelson contrast `(max - min) / (max + min)` over the square window;
/// zero where `max + min == 0`.
pub fn michelson_contrast(i: &ImagePlane, window_radius: usize) -> ImagePlane {
    let hi = local_max(i, window_radius);
    let lo = local_min(i, window_radius);
    hi.zip_map(&lo, |a, b| {
        let sum = a + b;
        if sum == 0.0 {
            0.0
        } else {
            (a - b) / sum
        }
    })
    .expect("same dims")
}

/// RMS contrast `sqrt(mean_window(((I - mean) / mean)^2))` = local std / local mean.
///
/// A window that is entirely zero has contrast 0; any other window with a
/// non-positive mean is a domain error.
pub fn rms_contrast(i: &ImagePlane, window_radius: usize) -> Result<ImagePlane> {
    let (w, h) = i.dims();
    // shift by the global mean to limit cancellation in E[x^2] - E[x]^2
    let shift = i.mean();
    let d = i.map(|v| v - shift);
    let mean_d = box_filter(&d, window_radius);
    let mean_d2 = box_filter(&d.map(|v| v * v), window_radius);
    let mut out = Vec::with_capacity(i.len());
    for k in 0..i.len() {
        let md = mean_d.data()[k];
        let var = (mean_d2.data()[k] - md * md).max(0.0);
        let mean = md + shift;
        if mean > 0.0 {
            out.push(var.sqrt() / mean);
        } else if mean == 0.0 && var == 0.0 {
            out.push(0.0);
        } else {
            return Err(Error::Domain {
                x: k % w.max(1),
                y: k / w.max(1),
                reason: format!("local mean {mean} is not positive in RMS contrast"),
            });
        }
    }
    Ok(ImagePlane::from_raw(w, h, out))
}

/// Decomposes `i` with the selected contrast model.
///
/// `s` is the surround image (used by the shunting and Weber models);
/// `window_radius` sets the patch for Michelson and RMS.
pub fn decompose_with(
    model: ContrastModel,
    i: &ImagePlane,
    s: &ImagePlane,
    p: &ShuntingParams,
    window_radius: usize,
) -> Result<Decomposition> {
    let contrast = match model {
        ContrastModel::Shunting => return decompose(i, s, p),
        ContrastModel::Weber => weber_contrast(i, s)?,
        ContrastModel::Michelson => michelson_contrast(i, window_radius),
        ContrastModel::Rms => rms_contrast(i, window_radius)?,
    };
    Ok(Decomposition::from_contrast(i, contrast))
}
