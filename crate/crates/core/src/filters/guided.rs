use crate::error::{Error, Result};
use crate::filters::box_filter;
use crate::imgcore::ImagePlane;

/// Window radius and regularizer shared by the guided and weighted guided filters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WgifSpec {
    radius: usize,
    epsilon: f64,
}

impl WgifSpec {
    pub fn new(radius: usize, epsilon: f64) -> Result<Self> {
        if radius < 1 {
            return Err(Error::InvalidParameter("filter radius must be >= 1".into()));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "filter epsilon must be positive and finite, got {epsilon}"
            )));
        }
        Ok(Self { radius, epsilon })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Guided filter: `q = mean(a) * guide + mean(b)` with
/// `a = cov(guide, i) / (var(guide) + epsilon)` and `b = mean(i) - a * mean(guide)`.
pub fn guided_filter(i: &ImagePlane, guide: &ImagePlane, spec: &WgifSpec) -> Result<ImagePlane> {
    i.ensure_same_dims(guide, "guided_filter")?;
    let eps = spec.epsilon;
    Ok(local_linear(i, guide, spec.radius, |_| eps))
}

/// Weighted guided filter.
///
/// Identical to [`guided_filter`] except that the regularizer of the window
/// centred at `k` is `epsilon / weight(k)`, where `weight` comes from
/// [`wgif_edge_weights`]: large near edges (weaker smoothing), small in flat
/// areas.
pub fn weighted_guided_filter(
    i: &ImagePlane,
    guide: &ImagePlane,
    spec: &WgifSpec,
) -> Result<ImagePlane> {
    i.ensure_same_dims(guide, "weighted_guided_filter")?;
    let weights = wgif_edge_weights(guide);
    let eps = spec.epsilon;
    let w = weights.data();
    Ok(local_linear(i, guide, spec.radius, |k| eps / w[k]))
}

/// Edge-aware weights of the weighted guided filter.
///
/// `weight(p) = (var3(p) + lambda) * mean_q(1 / (var3(q) + lambda))` where
/// `var3` is the guide variance in the 3x3 window and
/// `lambda = (0.001 * range(guide))^2`. A flat guide uses a unit range.
pub fn wgif_edge_weights(guide: &ImagePlane) -> ImagePlane {
    let mean = box_filter(guide, 1);
    let mean_sq = box_filter(&guide.map(|v| v * v), 1);
    let var3 = mean_sq
        .zip_map(&mean, |s, m| (s - m * m).max(0.0))
        .expect("same dims");
    let mut range = guide.max() - guide.min();
    if !(range > 0.0) {
        range = 1.0;
    }
    let lambda = (0.001 * range).powi(2);
    let inv_mean =
        var3.data().iter().map(|v| 1.0 / (v + lambda)).sum::<f64>() / var3.len().max(1) as f64;
    var3.map(|v| (v + lambda) * inv_mean)
}

fn local_linear(
    i: &ImagePlane,
    guide: &ImagePlane,
    radius: usize,
    reg: impl Fn(usize) -> f64,
) -> ImagePlane {
    let (w, h) = i.dims();
    let mean_g = box_filter(guide, radius);
    let mean_i = box_filter(i, radius);
    let corr_gi = box_filter(&i.zip_map(guide, |a, b| a * b).expect("same dims"), radius);
    let corr_gg = box_filter(&guide.map(|g| g * g), radius);

    let n = w * h;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mg = mean_g.data()[k];
        let mi = mean_i.data()[k];
        let var = corr_gg.data()[k] - mg * mg;
        let cov = corr_gi.data()[k] - mg * mi;
        let ak = cov / (var + reg(k));
        a.push(ak);
        b.push(mi - ak * mg);
    }
    let mean_a = box_filter(&ImagePlane::from_raw(w, h, a), radius);
    let mean_b = box_filter(&ImagePlane::from_raw(w, h, b), radius);
    let out = (0..n)
        .map(|k| mean_a.data()[k] * guide.data()[k] + mean_b.data()[k])
        .collect();
    ImagePlane::from_raw(w, h, out)
}
