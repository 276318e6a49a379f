use crate::error::{Error, Result};
use crate::filters::SurroundKind;
use crate::imgcore::IntensityDomain;
use crate::retinal::{ContrastModel, ShuntingParams};

/// Free parameters of the pipeline.
///
/// Defaults: `m = 1`, `g = 1`, `gamma = 0.6`, `k = ln 10`,
/// `sigmas = [1, 4, 16]`, WGIF surround, shunting contrast.
#[derive(Debug, Clone, PartialEq)]
pub struct VedaParams {
    /// Decay rate of the shunting model.
    pub m: f64,
    /// Gain of the shunting model.
    pub g: f64,
    /// Exponent of the luminance power law, in `(0, 1]`.
    pub gamma: f64,
    /// Log-domain offset of the luminance power law.
    pub k: f64,
    /// Surround scales, strictly increasing.
    pub sigmas: Vec<f64>,
    pub surround: SurroundKind,
    pub contrast: ContrastModel,
    pub domain: IntensityDomain,
}

impl Default for VedaParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            g: 1.0,
            gamma: 0.6,
            k: 10f64.ln(),
            sigmas: vec![1.0, 4.0, 16.0],
            surround: SurroundKind::Wgif,
            contrast: ContrastModel::Shunting,
            domain: IntensityDomain::default(),
        }
    }
}

/// The parameters each scale is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub m: f64,
    pub g: f64,
    pub gamma: f64,
    pub k: f64,
}

impl VedaParams {
    /// Geometric scale sequence `sigma_n = 4^(n-1) * sigma_1`.
    pub fn geometric_sigmas(sigma1: f64, count: usize) -> Vec<f64> {
        (0..count).map(|n| sigma1 * 4f64.powi(n as i32)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        ShuntingParams::new(self.m, self.g)?;
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        if !self.k.is_finite() {
            return Err(Error::InvalidParameter(format!("k must be finite, got {}", self.k)));
        }
        if self.sigmas.is_empty() {
            return Err(Error::InvalidParameter("at least one sigma is required".into()));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "sigmas must be positive, got {s}"
            )));
        }
        if self.sigmas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "sigmas must be strictly increasing, got {:?}",
                self.sigmas
            )));
        }
        Ok(())
    }

    pub fn shunting(&self) -> Result<ShuntingParams> {
        ShuntingParams::new(self.m, self.g)
    }

    pub fn scale_params(&self) -> ScaleParams {
        ScaleParams {
            m: self.m,
            g: self.g,
            gamma: self.gamma,
            k: self.k,
        }
    }

    /// Largest log intensity passed to `exp` (four times the domain scale).
    pub fn exp_ceiling(&self) -> f64 {
        (self.domain.scale() * 4.0).ln()
    }
}
