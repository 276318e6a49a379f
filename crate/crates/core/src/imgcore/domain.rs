use crate::error::{Error, Result};
use crate::imgcore::ImagePlane;

/// Maps unit-range samples to physical intensities before taking logs.
///
/// A sample `v` in `[0, 1]` becomes `floor + v * (scale - floor)`. With the
/// default `floor = 1, scale = 256` an 8-bit code `t` maps to `t + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityDomain {
    floor: f64,
    scale: f64,
}

impl Default for IntensityDomain {
    fn default() -> Self {
        Self {
            floor: 1.0,
            scale: 256.0,
        }
    }
}

impl IntensityDomain {
    pub fn new(floor: f64, scale: f64) -> Result<Self> {
        if !(floor > 0.0 && floor.is_finite() && scale > floor && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "intensity domain needs 0 < floor < scale, got floor={floor} scale={scale}"
            )));
        }
        Ok(Self { floor, scale })
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn to_intensity(&self, v: f64) -> f64 {
        self.floor + v * (self.scale - self.floor)
    }

    /// Inverse of [`Self::to_intensity`], clamped to the unit range.
    #[inline]
    pub fn to_unit(&self, t: f64) -> f64 {
        ((t - self.floor) / (self.scale - self.floor)).clamp(0.0, 1.0)
    }

    /// Natural log of the largest representable intensity.
    pub fn log_max(&self) -> f64 {
        self.scale.ln()
    }
}

/// `I = ln(floor + v * (scale - floor))`.
pub fn to_log_domain(v: &ImagePlane, dom: &IntensityDomain) -> ImagePlane {
    v.map(|s| dom.to_intensity(s).ln())
}

/// `v = clamp((exp(i) - floor) / (scale - floor), 0, 1)`.
pub fn from_log_domain(i: &ImagePlane, dom: &IntensityDomain) -> ImagePlane {
    // exp overflows to inf for huge inputs; the clamp then yields 1.
    i.map(|s| dom.to_unit(s.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(v: f64) -> ImagePlane {
        ImagePlane::filled(1, 1, v)
    }

    #[test]
    fn endpoints() {
        let dom = IntensityDomain::default();
        assert_eq!(to_log_domain(&one(0.0), &dom).get(0, 0), 0.0);
        assert!((to_log_domain(&one(1.0), &dom).get(0, 0) - 256f64.ln()).abs() < 1e-15);
        assert!((256f64.ln() - 5.545).abs() < 1e-3);
    }

    #[test]
    fn from_log_arithmetic_and_clamp() {
        let dom = IntensityDomain::default();
        let v = from_log_domain(&one(10f64.ln()), &dom).get(0, 0);
        assert!((v - 9.0 / 255.0).abs() < 1e-14);
        assert!((v - 0.0353).abs() < 1e-4);
        assert_eq!(from_log_domain(&one(1e6), &dom).get(0, 0), 1.0);
        assert_eq!(from_log_domain(&one(-50.0), &dom).get(0, 0), 0.0);
    }

    #[test]
    fn round_trip() {
        let dom = IntensityDomain::default();
        let v = ImagePlane::from_fn(64, 4, |x, y| (x + 64 * y) as f64 / 255.0);
        let back = from_log_domain(&to_log_domain(&v, &dom), &dom);
        for (a, b) in v.data().iter().zip(back.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_domains() {
        assert!(IntensityDomain::new(0.0, 1.0).is_err());
        assert!(IntensityDomain::new(2.0, 2.0).is_err());
        assert!(IntensityDomain::new(1.0, f64::INFINITY).is_err());
        assert!(IntensityDomain::new(0.5, 2.0).is_ok());
    }
}
