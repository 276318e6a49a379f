//! Retinal center-surround model.
//!
//! The shunting equation
//!
//! ```text
//! dr/dt = -m r + (g - r) C - (g + r) S
//! ```
//!
//! with center `C = I` (one pixel) and surround `S` is integrated from
//! `r(0) = 0`. Its steady state `g (I - S) / (m + I + S)` is the contrast
//! image; subtracting it from `I` leaves the residual that carries the
//! scene lighting.

mod models;
mod ode;

pub use models::{
    decompose_with, michelson_contrast, rms_contrast, weber_contrast, ContrastModel,
    WEBER_DENOMINATOR_FLOOR,
};
pub use ode::rk4;

use crate::error::{Error, Result};
use crate::imgcore::ImagePlane;

/// Decay rate `m` and gain `g` of the shunting equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuntingParams {
    m: f64,
    g: f64,
}

impl Default for ShuntingParams {
    fn default() -> Self {
        Self { m: 1.0, g: 1.0 }
    }
}

impl ShuntingParams {
    pub fn new(m: f64, g: f64) -> Result<Self> {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "decay rate m must be >= 0, got {m}"
            )));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gain g must be > 0, got {g}"
            )));
        }
        Ok(Self { m, g })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

/// Contrast image plus residual; `contrast + residual == input` sample by sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub contrast: ImagePlane,
    pub residual: ImagePlane,
}

impl Decomposition {
    /// Splits `i` given a raw contrast estimate.
    ///
    /// The residual is `i - c`; the stored contrast is then re-derived as
    /// `i - residual`, which makes `contrast + residual` reproduce `i`
    /// exactly whenever that difference is representable. That covers every
    /// input on the 8-bit log lattice (`I = 0` or `I >= ln 2`).
    pub(crate) fn from_contrast(i: &ImagePlane, raw_contrast: ImagePlane) -> Self {
        let (w, h) = i.dims();
        let n = i.len();
        let mut contrast = Vec::with_capacity(n);
        let mut residual = Vec::with_capacity(n);
        for (&iv, &c0) in i.data().iter().zip(raw_contrast.data()) {
            let r = iv - c0;
            contrast.push(iv - r);
            residual.push(r);
        }
        Self {
            contrast: ImagePlane::from_raw(w, h, contrast),
            residual: ImagePlane::from_raw(w, h, residual),
        }
    }

    pub fn recompose(&self) -> ImagePlane {
        self.contrast
            .zip_map(&self.residual, |c, r| c + r)
            .expect("decomposition planes share dims")
    }
}

fn check_denominators(i: &ImagePlane, s: &ImagePlane, p: &ShuntingParams) -> Result<()> {
    i.ensure_same_dims(s, "shunting model")?;
    let w = i.width().max(1);
    for (k, (&iv, &sv)) in i.data().iter().zip(s.data()).enumerate() {
        let den = p.m + iv + sv;
        if !(den > 0.0) {
            return Err(Error::Domain {
                x: k % w,
                y: k / w,
                reason: format!("shunting denominator m + I + S = {den} is not positive"),
            });
        }
    }
    Ok(())
}

/// Closed-form steady state `R_P = g (I - S) / (m + I + S)`.
pub fn shunting_steady_state(
    i: &ImagePlane,
    s: &ImagePlane,
    p: &ShuntingParams,
) -> Result<ImagePlane> {
    check_denominators(i, s, p)?;
    let (m, g) = (p.m, p.g);
    i.zip_map(s, |iv, sv| g * (iv - sv) / (m + iv + sv))
}

/// Closed-form transient from `r(0) = 0`:
/// `r(t) = g (I - S) / (m + I + S) * (1 - exp(-(m + I + S) t))`.
pub fn shunting_transient(
    i: &ImagePlane,
    s: &ImagePlane,
    p: &ShuntingParams,
    t: f64,
) -> Result<ImagePlane> {
    check_denominators(i, s, p)?;
    let (m, g) = (p.m, p.g);
    i.zip_map(s, |iv, sv| {
        let rate = m + iv + sv;
        g * (iv - sv) / rate * (1.0 - (-rate * t).exp())
    })
}

/// Integrates the shunting equation per pixel with classic RK4 from
/// `r(0) = 0` up to `t_end`.
///
/// The step count is `ceil(t_end / dt)`; the actual step is shrunk so the
/// last one lands on `t_end`.
pub fn shunting_ode_integrate(
    i: &ImagePlane,
    s: &ImagePlane,
    p: &ShuntingParams,
    t_end: f64,
    dt: f64,
) -> Result<ImagePlane> {
    i.ensure_same_dims(s, "shunting_ode_integrate")?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be >= 0, got {t_end}"
        )));
    }
    let (m, g) = (p.m, p.g);
    i.zip_map(s, |c, sur| {
        rk4(|_t, r| -m * r + (g - r) * c - (g + r) * sur, 0.0, 0.0, t_end, dt)
    })
}

/// Shunting-model decomposition `I = R_P + L_R`.
pub fn decompose(i: &ImagePlane, s: &ImagePlane, p: &ShuntingParams) -> Result<Decomposition> {
    let contrast = shunting_steady_state(i, s, p)?;
    Ok(Decomposition::from_contrast(i, contrast))
}
