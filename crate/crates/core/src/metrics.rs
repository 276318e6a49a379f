//! Full-reference quality metrics (PSNR, SSIM) and the lightness order
//! error (LOE) naturalness measure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::imgcore::{ColorImage, ImagePlane};

/// PSNR reported for identical images.
pub const PSNR_CAP_DB: f64 = 99.0;
/// Side length of the LOE sampling grid.
pub const LOE_GRID: usize = 50;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// Column order used for CSV and table output.
pub const METRIC_COLUMNS: [&str; 3] = ["psnr", "ssim", "loe"];

/// Named metric values for one image pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricReport {
    pub id: String,
    pub values: BTreeMap<String, f64>,
}

impl MetricReport {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

fn same_dims(a: &ColorImage, b: &ColorImage, what: &str) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::dims(what, a.dims(), b.dims()));
    }
    Ok(())
}

/// `10 log10(1 / MSE)` over all three channels on the unit scale, capped
/// at [`PSNR_CAP_DB`].
pub fn psnr(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    same_dims(a, b, "psnr")?;
    let n = (a.width() * a.height() * 3) as f64;
    let mut sse = 0.0;
    for (pa, pb) in a.planes().iter().zip(b.planes()) {
        for (x, y) in pa.data().iter().zip(pb.data()) {
            sse += (x - y) * (x - y);
        }
    }
    if n == 0.0 {
        return Err(Error::Usage("psnr of an empty image".into()));
    }
    let mse = sse / n;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((10.0 * (1.0 / mse).log10()).min(PSNR_CAP_DB))
}

/// Mean of the three channels.
pub fn luma(img: &ColorImage) -> ImagePlane {
    let [r, g, b] = img.planes();
    r.zip_map(g, |x, y| x + y)
        .and_then(|rg| rg.zip_map(b, |s, z| s + z))
        .expect("channels share dims")
        .map(|s| s / 3.0)
}

/// Single-scale SSIM on luma: 11x11 Gaussian window (sigma 1.5),
/// `K1 = 0.01`, `K2 = 0.03`, dynamic range 1, averaged over the windows
/// that fit entirely inside the image.
pub fn ssim(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    same_dims(a, b, "ssim")?;
    let (w, h) = a.dims();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::Usage(format!(
            "ssim needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {w}x{h}"
        )));
    }
    Ok(ssim_planes(&luma(a), &luma(b)))
}

fn ssim_taps() -> Vec<f64> {
    let r = (SSIM_WINDOW / 2) as f64;
    let raw: Vec<f64> = (0..SSIM_WINDOW)
        .map(|j| {
            let x = j as f64 - r;
            (-x * x / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// Separable "valid" convolution: output is `(w - 10) x (h - 10)`.
fn valid_filter(p: &ImagePlane, taps: &[f64]) -> ImagePlane {
    let (w, h) = p.dims();
    let k = taps.len();
    let (ow, oh) = (w + 1 - k, h + 1 - k);
    let mut horiz = vec![0.0; ow * h];
    for y in 0..h {
        let row = p.row(y);
        for x in 0..ow {
            horiz[y * ow + x] = row[x..x + k].iter().zip(taps).map(|(v, t)| v * t).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = (0..k).map(|j| horiz[(y + j) * ow + x] * taps[j]).sum();
        }
    }
    ImagePlane::from_raw(ow, oh, out)
}

fn ssim_planes(x: &ImagePlane, y: &ImagePlane) -> f64 {
    let taps = ssim_taps();
    let c1 = SSIM_K1 * SSIM_K1;
    let c2 = SSIM_K2 * SSIM_K2;
    let mu_x = valid_filter(x, &taps);
    let mu_y = valid_filter(y, &taps);
    let xx = valid_filter(&x.map(|v| v * v), &taps);
    let yy = valid_filter(&y.map(|v| v * v), &taps);
    let xy = valid_filter(&x.zip_map(y, |a, b| a * b).expect("same dims"), &taps);
    let n = mu_x.len();
    let mut total = 0.0;
    for k in 0..n {
        let (mx, my) = (mu_x.data()[k], mu_y.data()[k]);
        let vx = xx.data()[k] - mx * mx;
        let vy = yy.data()[k] - my * my;
        let cov = xy.data()[k] - mx * my;
        let num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        let den = (mx * mx + my * my + c1) * (vx + vy + c2);
        total += num / den;
    }
    total / n as f64
}

/// Lightness `max(R, G, B)` sampled on at most a 50x50 grid.
pub fn loe_lightness(img: &ColorImage) -> Vec<f64> {
    let (w, h) = img.dims();
    let (tw, th) = (w.min(LOE_GRID), h.min(LOE_GRID));
    let [r, g, b] = img.planes();
    let mut out = Vec::with_capacity(tw * th);
    for j in 0..th {
        let y = (2 * j + 1) * h / (2 * th);
        for i in 0..tw {
            let x = (2 * i + 1) * w / (2 * tw);
            out.push(r.get(x, y).max(g.get(x, y)).max(b.get(x, y)));
        }
    }
    out
}

/// Lightness order error: the mean, over sampled pixels `x`, of the number
/// of pixels `y` whose order relation `L(x) >= L(y)` differs between the
/// original and the enhanced image.
pub fn loe(original: &ColorImage, enhanced: &ColorImage) -> Result<f64> {
    same_dims(original, enhanced, "loe")?;
    let a = loe_lightness(original);
    let b = loe_lightness(enhanced);
    if a.is_empty() {
        return Err(Error::Usage("loe of an empty image".into()));
    }
    let mut flips: u64 = 0;
    for x in 0..a.len() {
        let (ax, bx) = (a[x], b[x]);
        flips += a
            .iter()
            .zip(&b)
            .filter(|(&ay, &by)| (ax >= ay) != (bx >= by))
            .count() as u64;
    }
    Ok(flips as f64 / a.len() as f64)
}

/// PSNR and SSIM of `enhanced` against `reference`, LOE of `enhanced`
/// against `original`. SSIM is omitted for images below 11x11.
pub fn evaluate(
    id: impl Into<String>,
    enhanced: &ColorImage,
    reference: &ColorImage,
    original: &ColorImage,
) -> Result<MetricReport> {
    let mut report = MetricReport::new(id);
    report.insert("psnr", psnr(enhanced, reference)?);
    let (w, h) = enhanced.dims();
    if w >= SSIM_WINDOW && h >= SSIM_WINDOW {
        report.insert("ssim", ssim(enhanced, reference)?);
    }
    report.insert("loe", loe(original, enhanced)?);
    Ok(report)
}

/// Per-metric arithmetic means over the reports that carry the metric.
pub fn summarize(reports: &[MetricReport]) -> MetricReport {
    let mut summary = MetricReport::new("mean");
    for name in METRIC_COLUMNS {
        let vals: Vec<f64> = reports.iter().filter_map(|r| r.get(name)).collect();
        if !vals.is_empty() {
            summary.insert(name, vals.iter().sum::<f64>() / vals.len() as f64);
        }
    }
    summary
}

/// Writes `id,psnr,ssim,loe` rows (header first). Missing values are empty
/// fields.
pub fn write_csv<W: Write>(out: W, reports: &[MetricReport]) -> Result<()> {
    write_csv_with(out, &[], reports.iter().map(|r| (Vec::new(), r)))
}

/// Like [`write_csv`] with extra leading columns per row.
pub fn write_csv_with<'a, W: Write>(
    out: W,
    extra_headers: &[&str],
    rows: impl IntoIterator<Item = (Vec<String>, &'a MetricReport)>,
) -> Result<()> {
    let to_io = |e: csv::Error| {
        Error::io(
            "<csv>",
            std::io::Error::other(e.to_string()),
        )
    };
    let mut wtr = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = vec!["id"];
    header.extend_from_slice(extra_headers);
    header.extend_from_slice(&METRIC_COLUMNS);
    wtr.write_record(&header).map_err(to_io)?;
    for (extra, report) in rows {
        let mut record = vec![report.id.clone()];
        record.extend(extra);
        for name in METRIC_COLUMNS {
            record.push(report.get(name).map(|v| v.to_string()).unwrap_or_default());
        }
        wtr.write_record(&record).map_err(to_io)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Fixed-width text table with one row per report.
pub fn format_table(reports: &[MetricReport]) -> String {
    let id_width = reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let mut s = format!("{:<id_width$}", "id");
    for name in METRIC_COLUMNS {
        let _ = write!(s, " {name:>10}");
    }
    s.push('\n');
    for r in reports {
        let _ = write!(s, "{:<id_width$}", r.id);
        for name in METRIC_COLUMNS {
            match r.get(name) {
                Some(v) => {
                    let _ = write!(s, " {v:>10.4}");
                }
                None => {
                    let _ = write!(s, " {:>10}", "-");
                }
            }
        }
        s.push('\n');
    }
    s
}
