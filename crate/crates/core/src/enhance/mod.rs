//! The enhancement pipeline.
//!
//! Per scale `sigma_n`: surround `S`, decomposition `I = R_P + L_R`,
//! luminance modification `L_P = gamma * L_R + k`, recombination
//! `T_E = exp(R_P + L_P)`. The scales are fused in the intensity domain with
//! weights proportional to the (floored) residuals. Color images are
//! processed on the HSV value channel only.

mod params;
mod sweep;

pub use params::{ScaleParams, VedaParams};
pub use sweep::{default_gamma_grid, default_k_grid, parameter_sweep, Sweep, SweepCell};

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::{make_surround, scale_radius, GaussianSpec};
use crate::imgcore::{hsv_to_rgb, rgb_to_hsv, to_log_domain, ColorImage, ColorSpace, ImagePlane};
use crate::retinal::decompose_with;

/// Residual floor applied before the scale weights are normalized.
pub const RESIDUAL_WEIGHT_FLOOR: f64 = 1e-6;

/// Everything computed at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleLayer {
    pub sigma: f64,
    pub params: ScaleParams,
    pub surround: ImagePlane,
    pub contrast: ImagePlane,
    pub residual: ImagePlane,
    /// `T_E`, intensity domain, before normalization.
    pub enhanced: ImagePlane,
}

/// Per-scale layers in increasing-sigma order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleStack {
    pub layers: Vec<ScaleLayer>,
}

impl ScaleStack {
    pub fn sigmas(&self) -> Vec<f64> {
        self.layers.iter().map(|l| l.sigma).collect()
    }

    /// Residual of the smallest scale.
    pub fn finest_residual(&self) -> &ImagePlane {
        &self.layers[0].residual
    }
}

/// Result of enhancing a value (luminance) plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueEnhancement {
    /// Log-domain input `I`.
    pub log_input: ImagePlane,
    pub stack: ScaleStack,
    pub weights: Vec<ImagePlane>,
    /// Fused intensity `T_MSE`.
    pub fused: ImagePlane,
    /// Output value channel in `[0, 1]`.
    pub value: ImagePlane,
}

/// Output of [`multiscale_enhance_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct EnhanceOutput {
    pub image: ColorImage,
    pub detail: ValueEnhancement,
    /// Hue and saturation of a color input; `None` for gray inputs.
    chroma: Option<(ImagePlane, ImagePlane)>,
}

impl EnhanceOutput {
    /// Rebuilds the RGB output around a replacement value channel,
    /// keeping the input's hue and saturation.
    pub fn recolor(&self, value: &ImagePlane) -> Result<ColorImage> {
        rebuild(self.chroma.as_ref(), value.clone())
    }
}

/// Power-law luminance modification, linear in the log domain:
/// `L_P = gamma * L_R + k`.
pub fn luminance_modify(lr: &ImagePlane, gamma: f64, k: f64) -> ImagePlane {
    lr.map(|v| gamma * v + k)
}

/// Runs one scale of the pipeline on a log-domain plane.
pub fn single_scale_enhance(i: &ImagePlane, sigma: f64, p: &VedaParams) -> Result<ScaleLayer> {
    p.validate()?;
    scale_layer(i, sigma, p)
}

fn scale_layer(i: &ImagePlane, sigma: f64, p: &VedaParams) -> Result<ScaleLayer> {
    let surround = make_surround(i, sigma, p.surround)?;
    let decomposition =
        decompose_with(p.contrast, i, &surround, &p.shunting()?, scale_radius(sigma))?;
    let perceived = luminance_modify(&decomposition.residual, p.gamma, p.k);
    let ceiling = p.exp_ceiling();
    let enhanced = decomposition
        .contrast
        .zip_map(&perceived, |c, l| (c + l).min(ceiling).exp())?;
    Ok(ScaleLayer {
        sigma,
        params: p.scale_params(),
        surround,
        contrast: decomposition.contrast,
        residual: decomposition.residual,
        enhanced,
    })
}

/// Scale weights `phi_n = L_R,n / sum_n L_R,n` with residuals floored at
/// [`RESIDUAL_WEIGHT_FLOOR`].
pub fn multiscale_weights(residuals: &[ImagePlane]) -> Result<Vec<ImagePlane>> {
    let first = residuals
        .first()
        .ok_or_else(|| Error::Usage("multiscale_weights needs at least one residual".into()))?;
    for r in &residuals[1..] {
        first.ensure_same_dims(r, "multiscale_weights")?;
    }
    let (w, h) = first.dims();
    let n = first.len();
    let mut totals = vec![0.0; n];
    for r in residuals {
        for (t, &v) in totals.iter_mut().zip(r.data()) {
            *t += v.max(RESIDUAL_WEIGHT_FLOOR);
        }
    }
    Ok(residuals
        .iter()
        .map(|r| {
            let data = r
                .data()
                .iter()
                .zip(&totals)
                .map(|(&v, &t)| v.max(RESIDUAL_WEIGHT_FLOOR) / t)
                .collect();
            ImagePlane::from_raw(w, h, data)
        })
        .collect())
}

/// Drops scales whose Gaussian support `6 * ceil(sigma) + 1` exceeds the
/// smaller image side. The first scale is always kept.
pub fn effective_sigmas(sigmas: &[f64], width: usize, height: usize) -> Vec<f64> {
    let side = width.min(height);
    let mut kept = Vec::with_capacity(sigmas.len());
    for (n, &sigma) in sigmas.iter().enumerate() {
        let support = GaussianSpec::width_for(sigma);
        if support <= side {
            kept.push(sigma);
        } else if n == 0 {
            warn!(
                "image {width}x{height} is smaller than the {support}-pixel support of sigma={sigma}; \
                 processing with mirrored borders"
            );
            kept.push(sigma);
        } else {
            warn!(
                "dropping scale sigma={sigma}: support {support} exceeds image side {side}"
            );
        }
    }
    kept
}

/// Multi-scale enhancement of a unit-range value plane.
pub fn enhance_value(v: &ImagePlane, p: &VedaParams) -> Result<ValueEnhancement> {
    p.validate()?;
    if v.is_empty() {
        return Err(Error::Usage("cannot enhance an empty image".into()));
    }
    let log_input = to_log_domain(v, &p.domain);
    let sigmas = effective_sigmas(&p.sigmas, v.width(), v.height());
    let layers = sigmas
        .par_iter()
        .map(|&sigma| scale_layer(&log_input, sigma, p))
        .collect::<Result<Vec<_>>>()?;
    let residuals: Vec<ImagePlane> = layers.iter().map(|l| l.residual.clone()).collect();
    let weights = multiscale_weights(&residuals)?;

    // fixed scale order keeps the floating-point sum reproducible
    let (w, h) = v.dims();
    let mut fused = vec![0.0; v.len()];
    for (layer, weight) in layers.iter().zip(&weights) {
        for ((acc, &t), &phi) in fused.iter_mut().zip(layer.enhanced.data()).zip(weight.data()) {
            *acc += phi * t;
        }
    }
    let fused = ImagePlane::from_raw(w, h, fused);
    let value = fused.map(|t| p.domain.to_unit(t));
    Ok(ValueEnhancement {
        log_input,
        stack: ScaleStack { layers },
        weights,
        fused,
        value,
    })
}

/// Enhances an RGB image on its HSV value channel.
pub fn multiscale_enhance(img: &ColorImage, p: &VedaParams) -> Result<ColorImage> {
    Ok(multiscale_enhance_detailed(img, p)?.image)
}

/// Like [`multiscale_enhance`] but also returns the intermediate planes.
///
/// Gray inputs (three identical channels) skip the HSV round trip.
pub fn multiscale_enhance_detailed(img: &ColorImage, p: &VedaParams) -> Result<EnhanceOutput> {
    if img.space() != ColorSpace::Rgb {
        return Err(Error::Usage(
            "multiscale_enhance expects an RGB image".into(),
        ));
    }
    let (value, chroma) = if img.is_gray() {
        (img.plane(0).clone(), None)
    } else {
        let [hue, sat, val] = rgb_to_hsv(img)?.into_planes();
        (val, Some((hue, sat)))
    };
    let detail = enhance_value(&value, p)?;
    let image = rebuild(chroma.as_ref(), detail.value.clone())?;
    Ok(EnhanceOutput {
        image,
        detail,
        chroma,
    })
}

fn rebuild(chroma: Option<&(ImagePlane, ImagePlane)>, value: ImagePlane) -> Result<ColorImage> {
    match chroma {
        None => ColorImage::from_gray(value),
        Some((hue, sat)) => {
            let hsv = ColorImage::new([hue.clone(), sat.clone(), value], ColorSpace::Hsv)?;
            hsv_to_rgb(&hsv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::SurroundKind;
    use crate::imgcore::IntensityDomain;

    fn textured(w: usize, h: usize) -> ImagePlane {
        ImagePlane::from_fn(w, h, |x, y| {
            let base = if x < w / 2 { 0.08 } else { 0.8 };
            base * (1.0 + 0.15 * (((x * 7 + y * 3) % 5) as f64 - 2.0) / 2.0)
        })
    }

    #[test]
    fn luminance_values() {
        let lr = ImagePlane::filled(1, 1, 100f64.ln());
        let lp = luminance_modify(&lr, 0.6, 10f64.ln());
        assert!((lp.get(0, 0) - 5.06569).abs() < 1e-5);
        let x = ImagePlane::from_fn(4, 4, |x, y| (x * y) as f64 * 0.3 - 1.0);
        assert_eq!(luminance_modify(&x, 1.0, 0.0), x);
        // ratio of perceived intensities for T = 10 and T = 100 is 10^gamma
        let lo = luminance_modify(&ImagePlane::filled(1, 1, 10f64.ln()), 0.6, 10f64.ln());
        let ratio = (lp.get(0, 0) - lo.get(0, 0)).exp();
        assert!((ratio - 10f64.powf(0.6)).abs() < 1e-12);
        assert!(ratio < 10.0);
    }

    #[test]
    fn brightens_below_fixed_point() {
        let k = 10f64.ln();
        let lr = ImagePlane::from_fn(300, 1, |x, _| x as f64 * 0.05 - 2.0);
        for gamma in [0.4, 0.7] {
            let fixed = k / (1.0 - gamma);
            let lp = luminance_modify(&lr, gamma, k);
            for x in 0..300 {
                let l = lr.get(x, 0);
                if l < fixed - 1e-9 {
                    assert!(lp.get(x, 0) > l, "gamma={gamma} L_R={l}");
                } else if l > fixed + 1e-9 {
                    assert!(lp.get(x, 0) < l, "gamma={gamma} L_R={l}");
                }
            }
        }
    }

    #[test]
    fn weights_symmetry_and_single_scale() {
        let r = ImagePlane::from_fn(5, 4, |x, y| (x + y) as f64 * 0.7);
        let w = multiscale_weights(&[r.clone(), r.clone(), r.clone()]).unwrap();
        for plane in &w {
            assert!(plane.data().iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        }
        let single = multiscale_weights(&[r.clone()]).unwrap();
        assert!(single[0].data().iter().all(|&v| v == 1.0));
        assert!(multiscale_weights(&[]).is_err());
        let other = ImagePlane::zeros(4, 4);
        assert!(multiscale_weights(&[r, other]).is_err());
    }

    #[test]
    fn weights_handle_nonpositive_residuals() {
        let a = ImagePlane::new(3, 1, vec![-1.0, 0.0, 2.0]).unwrap();
        let b = ImagePlane::new(3, 1, vec![-5.0, 1.0, 2.0]).unwrap();
        let w = multiscale_weights(&[a, b]).unwrap();
        assert_eq!(w[0].get(0, 0), 0.5);
        assert!(w[0].get(1, 0) < 1e-5);
        assert_eq!(w[1].get(2, 0), 0.5);
    }

    #[test]
    fn flat_input_is_a_pure_gamma_curve() {
        let c: f64 = 40.0;
        let p = VedaParams::default();
        let i = ImagePlane::filled(20, 20, c.ln());
        let layer = single_scale_enhance(&i, 4.0, &p).unwrap();
        let want = p.k.exp() * c.powf(p.gamma);
        for &t in layer.enhanced.data() {
            assert!((t - want).abs() < 1e-9 * want);
        }
        assert!(layer.contrast.data().iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn identity_configuration_returns_input_intensity() {
        let p = VedaParams {
            gamma: 1.0,
            k: 0.0,
            g: 1.7,
            ..VedaParams::default()
        };
        let v = textured(40, 30);
        let i = to_log_domain(&v, &p.domain);
        let layer = single_scale_enhance(&i, 4.0, &p).unwrap();
        for (t, iv) in layer.enhanced.data().iter().zip(i.data()) {
            assert!((t - iv.exp()).abs() < 1e-12 * iv.exp());
        }
    }

    #[test]
    fn fused_output_is_convex_in_scale_outputs() {
        let v = textured(100, 98);
        let out = enhance_value(&v, &VedaParams::default()).unwrap();
        assert_eq!(out.stack.layers.len(), 3);
        for k in 0..v.len() {
            let vals: Vec<f64> = out.stack.layers.iter().map(|l| l.enhanced.data()[k]).collect();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let t = out.fused.data()[k];
            assert!(t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12));
            let wsum: f64 = out.weights.iter().map(|w| w.data()[k]).sum();
            assert!((wsum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_parameters_are_shared() {
        let v = textured(100, 100);
        let out = enhance_value(&v, &VedaParams::default()).unwrap();
        let first = out.stack.layers[0].params;
        assert!(out.stack.layers.iter().all(|l| l.params == first));
        assert_eq!(out.stack.sigmas(), vec![1.0, 4.0, 16.0]);
    }

    #[test]
    fn oversized_scales_are_dropped() {
        assert_eq!(effective_sigmas(&[1.0, 4.0, 16.0], 64, 40), vec![1.0, 4.0]);
        assert_eq!(effective_sigmas(&[1.0, 4.0, 16.0], 97, 200), vec![1.0, 4.0, 16.0]);
        assert_eq!(effective_sigmas(&[1.0, 4.0], 3, 3), vec![1.0]);
        let tiny = ImagePlane::filled(3, 2, 0.4);
        let out = enhance_value(&tiny, &VedaParams::default()).unwrap();
        assert_eq!(out.stack.layers.len(), 1);
    }

    #[test]
    fn gray_and_color_paths() {
        let v = textured(32, 24);
        let gray = ColorImage::from_gray(v.clone()).unwrap();
        let out = multiscale_enhance(&gray, &VedaParams::default()).unwrap();
        assert!(out.is_gray());
        let direct = enhance_value(&v, &VedaParams::default()).unwrap();
        assert_eq!(out.plane(0), &direct.value);

        let color = ColorImage::new(
            [v.map(|x| x * 0.9), v.clone(), v.map(|x| x * 0.5)],
            ColorSpace::Rgb,
        )
        .unwrap();
        let out = multiscale_enhance_detailed(&color, &VedaParams::default()).unwrap();
        let before = rgb_to_hsv(&color).unwrap();
        let after = rgb_to_hsv(&out.image).unwrap();
        for k in 0..v.len() {
            if before.plane(1).data()[k] > 0.0 {
                assert!((before.plane(0).data()[k] - after.plane(0).data()[k]).abs() < 1e-9);
                assert!((before.plane(1).data()[k] - after.plane(1).data()[k]).abs() < 1e-9);
            }
        }
        assert_eq!(out.recolor(&out.detail.value).unwrap(), out.image);
    }

    #[test]
    fn rejects_bad_input() {
        let hsv = rgb_to_hsv(&ColorImage::from_gray(ImagePlane::filled(4, 4, 0.2)).unwrap()).unwrap();
        assert!(matches!(
            multiscale_enhance(&hsv, &VedaParams::default()),
            Err(Error::Usage(_))
        ));
        let bad = VedaParams {
            gamma: 1.5,
            ..VedaParams::default()
        };
        assert!(enhance_value(&ImagePlane::filled(4, 4, 0.2), &bad).is_err());
    }

    #[test]
    fn gaussian_surround_runs() {
        let p = VedaParams {
            surround: SurroundKind::Gaussian,
            domain: IntensityDomain::default(),
            ..VedaParams::default()
        };
        let out = enhance_value(&textured(50, 50), &p).unwrap();
        assert!(out.value.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
