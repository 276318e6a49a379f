use rayon::prelude::*;

use crate::enhance::{multiscale_enhance, VedaParams};
use crate::error::{Error, Result};
use crate::imgcore::{ColorImage, ColorSpace, ImagePlane};
use crate::metrics::{self, MetricReport};

/// `gamma = 0.1, 0.2, ..., 0.9`.
pub fn default_gamma_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

/// `k = ln 5, ln 10, ..., ln 55`.
pub fn default_k_grid() -> Vec<f64> {
    (1..=11).map(|j| (5.0 * j as f64).ln()).collect()
}

/// One (gamma, k) cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub gamma: f64,
    pub k: f64,
    pub image: ColorImage,
    /// Metrics of the cell output against the input image.
    pub report: MetricReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub gammas: Vec<f64>,
    pub ks: Vec<f64>,
    /// Row-major over `(k, gamma)`: cell `(gi, ki)` sits at `ki * gammas.len() + gi`.
    pub cells: Vec<SweepCell>,
}

impl Sweep {
    pub fn cell(&self, gamma_index: usize, k_index: usize) -> &SweepCell {
        &self.cells[k_index * self.gammas.len() + gamma_index]
    }

    /// Tiles the cell outputs: gamma increases left to right, k increases
    /// bottom to top.
    pub fn mosaic(&self) -> Result<ColorImage> {
        let (cw, ch) = self.cells[0].image.dims();
        let (ng, nk) = (self.gammas.len(), self.ks.len());
        let (w, h) = (cw * ng, ch * nk);
        let planes = [0, 1, 2].map(|c| {
            ImagePlane::from_fn(w, h, |x, y| {
                let gi = x / cw;
                let ki = nk - 1 - y / ch;
                self.cell(gi, ki).image.plane(c).get(x % cw, y % ch)
            })
        });
        ColorImage::new(planes, ColorSpace::Rgb)
    }
}

/// Enhances `img` for every `(gamma, k)` pair; the remaining parameters
/// come from `base`.
pub fn parameter_sweep(
    img: &ColorImage,
    gamma_grid: &[f64],
    k_grid: &[f64],
    base: &VedaParams,
) -> Result<Sweep> {
    if gamma_grid.is_empty() || k_grid.is_empty() {
        return Err(Error::Usage("parameter sweep needs non-empty grids".into()));
    }
    let pairs: Vec<(f64, f64)> = k_grid
        .iter()
        .flat_map(|&k| gamma_grid.iter().map(move |&gamma| (gamma, k)))
        .collect();
    let cells = pairs
        .par_iter()
        .map(|&(gamma, k)| {
            let params = VedaParams {
                gamma,
                k,
                ..base.clone()
            };
            let image = multiscale_enhance(img, &params)?;
            let report = metrics::evaluate(format!("g{gamma}_k{k}"), &image, img, img)?;
            Ok(SweepCell {
                gamma,
                k,
                image,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        gammas: gamma_grid.to_vec(),
        ks: k_grid.to_vec(),
        cells,
    })
}
