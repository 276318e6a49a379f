use crate::error::{Error, Result};
use crate::filters::{clamp_into, pad_row, separable};
use crate::imgcore::ImagePlane;

/// Sampled, normalized 1-D Gaussian kernel of width `6 * ceil(sigma) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    sigma: f64,
    taps: Vec<f64>,
}

impl GaussianSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gaussian sigma must be positive, got {sigma}"
            )));
        }
        let radius = 3 * sigma.ceil() as usize;
        let denom = 2.0 * sigma * sigma;
        let raw: Vec<f64> = (0..=2 * radius)
            .map(|j| {
                let x = j as f64 - radius as f64;
                (-x * x / denom).exp()
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        let taps = raw.into_iter().map(|v| v / sum).collect();
        Ok(Self { sigma, taps })
    }

    /// Kernel width for `sigma`, without building the taps.
    pub fn width_for(sigma: f64) -> usize {
        6 * sigma.ceil() as usize + 1
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn width(&self) -> usize {
        self.taps.len()
    }

    pub fn radius(&self) -> usize {
        self.taps.len() / 2
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }
}

/// Separable Gaussian blur with mirrored borders.
pub fn gaussian_filter(i: &ImagePlane, spec: &GaussianSpec) -> ImagePlane {
    if i.is_empty() {
        return i.clone();
    }
    let taps = spec.taps();
    let radius = spec.radius();
    let out = separable(i, |src, dst| {
        let mut padded = Vec::new();
        pad_row(src, radius, &mut padded);
        for (x, d) in dst.iter_mut().enumerate() {
            *d = padded[x..x + taps.len()]
                .iter()
                .zip(taps)
                .map(|(v, t)| v * t)
                .sum();
        }
    });
    clamp_into(out, i.min(), i.max())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_follow_three_sigma_rule() {
        for (sigma, width) in [(1.0, 7), (4.0, 25), (16.0, 97), (0.5, 7), (2.2, 19)] {
            assert_eq!(GaussianSpec::new(sigma).unwrap().width(), width);
            assert_eq!(GaussianSpec::width_for(sigma), width);
        }
    }

    #[test]
    fn taps_sum_to_one_and_are_symmetric() {
        for sigma in [0.3, 1.0, 4.0, 16.0, 33.3] {
            let spec = GaussianSpec::new(sigma).unwrap();
            let sum: f64 = spec.taps().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            let t = spec.taps();
            for j in 0..t.len() {
                assert_eq!(t[j], t[t.len() - 1 - j]);
            }
        }
    }

    #[test]
    fn constant_is_preserved() {
        let p = ImagePlane::filled(9, 5, 3.25);
        let out = gaussian_filter(&p, &GaussianSpec::new(4.0).unwrap());
        assert!(out.data().iter().all(|v| (v - 3.25).abs() < 1e-9));
    }

    #[test]
    fn rejects_bad_sigma() {
        assert!(GaussianSpec::new(0.0).is_err());
        assert!(GaussianSpec::new(f64::NAN).is_err());
    }
}
