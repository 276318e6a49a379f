//! Residual-weighted noise suppression.
//!
//! The enhanced plane and a denoised copy of it are blended per pixel with
//! the normalized residual as the weight: bright regions keep the enhanced
//! detail, dark regions (where enhancement amplifies noise) take the
//! denoised values.

use std::fmt;
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::enhance::ValueEnhancement;
use crate::error::{Error, Result};
use crate::filters::{guided_filter, WgifSpec};
use crate::imgcore::{dump_plane, read_pfm, ImagePlane};

/// Window radius of the built-in self-guided denoiser.
pub const DEFAULT_DENOISE_RADIUS: usize = 2;

/// Strength used when denoising is requested without an explicit value.
pub const DEFAULT_DENOISE_STRENGTH: f64 = 0.1;

type DenoiseFn = dyn Fn(&ImagePlane) -> Result<ImagePlane> + Send + Sync;

/// A named plane-to-plane denoiser.
#[derive(Clone)]
pub struct DenoiserHandle {
    name: String,
    op: Arc<DenoiseFn>,
}

impl fmt::Debug for DenoiserHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenoiserHandle")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl DenoiserHandle {
    pub fn new(
        name: impl Into<String>,
        op: impl Fn(&ImagePlane) -> Result<ImagePlane> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            op: Arc::new(op),
        }
    }

    /// The built-in self-guided filter with `epsilon = strength^2`.
    pub fn guided(strength: f64) -> Result<Self> {
        check_strength(strength)?;
        Ok(Self::new(format!("guided(strength={strength})"), move |p| {
            default_denoiser(p, strength)
        }))
    }

    /// Runs an external program on PFM temp files.
    ///
    /// `{input}` and `{output}` in `args` are replaced by the temp file
    /// paths. The program must write a single-channel PFM of the same size.
    pub fn external(program: impl Into<String>, args: Vec<String>) -> Self {
        let program = program.into();
        let name = program.clone();
        Self::new(name.clone(), move |plane| {
            run_external(&name, &program, &args, plane)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Applies the denoiser and checks that the output matches the input size.
    pub fn apply(&self, plane: &ImagePlane) -> Result<ImagePlane> {
        let out = (self.op)(plane)?;
        if out.dims() != plane.dims() {
            return Err(Error::Denoiser {
                name: self.name.clone(),
                message: format!(
                    "returned {}x{} for a {}x{} input",
                    out.width(),
                    out.height(),
                    plane.width(),
                    plane.height()
                ),
            });
        }
        Ok(out)
    }
}

fn check_strength(strength: f64) -> Result<()> {
    if !(strength >= 0.0 && strength.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "denoise strength must be >= 0, got {strength}"
        )));
    }
    Ok(())
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn run_external(name: &str, program: &str, args: &[String], plane: &ImagePlane) -> Result<ImagePlane> {
    let fail = |message: String| Error::Denoiser {
        name: name.to_string(),
        message,
    };
    let tag = format!(
        "veda-denoise-{}-{}",
        std::process::id(),
        TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    );
    let dir = std::env::temp_dir();
    let input: PathBuf = dir.join(format!("{tag}-in.pfm"));
    let output: PathBuf = dir.join(format!("{tag}-out.pfm"));
    dump_plane(&input, plane)?;
    let expanded: Vec<String> = args
        .iter()
        .map(|a| {
            a.replace("{input}", &input.to_string_lossy())
                .replace("{output}", &output.to_string_lossy())
        })
        .collect();
    let status = Command::new(program).args(&expanded).status();
    let result = match status {
        Ok(s) if s.success() => read_pfm(&output).and_then(|mut planes| {
            if planes.len() == 1 {
                Ok(planes.remove(0))
            } else {
                Err(fail(format!("expected a 1-channel PFM, got {}", planes.len())))
            }
        }),
        Ok(s) => Err(fail(format!("exited with {s}"))),
        Err(e) => Err(fail(format!("could not start: {e}"))),
    };
    let _ = std::fs::remove_file(&input);
    let _ = std::fs::remove_file(&output);
    result
}

/// Min-max normalization to `[0, 1]`; a constant plane maps to 0.5.
pub fn normalize_residual(lr: &ImagePlane) -> ImagePlane {
    let (lo, hi) = (lr.min(), lr.max());
    let span = hi - lo;
    if !(span > 0.0) {
        return ImagePlane::filled(lr.width(), lr.height(), 0.5);
    }
    lr.map(|v| ((v - lo) / span).clamp(0.0, 1.0))
}

/// `T_F = L_NR * T_E + (1 - L_NR) * T_DE`.
pub fn fuse_denoised(t_e: &ImagePlane, t_de: &ImagePlane, l_nr: &ImagePlane) -> Result<ImagePlane> {
    t_e.ensure_same_dims(t_de, "fuse_denoised")?;
    t_e.ensure_same_dims(l_nr, "fuse_denoised")?;
    let n = t_e.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (e, d, wgt) = (t_e.data()[k], t_de.data()[k], l_nr.data()[k]);
        // endpoints are returned verbatim; elsewhere the blend is clamped to
        // the input pair so rounding never leaves the convex hull
        let v = if wgt >= 1.0 {
            e
        } else if wgt <= 0.0 {
            d
        } else {
            (wgt * e + (1.0 - wgt) * d).clamp(e.min(d), e.max(d))
        };
        out.push(v);
    }
    ImagePlane::new(t_e.width(), t_e.height(), out)
}

/// Self-guided filter with radius [`DEFAULT_DENOISE_RADIUS`] and
/// `epsilon = strength^2`. Strength 0 returns the input.
pub fn default_denoiser(plane: &ImagePlane, strength: f64) -> Result<ImagePlane> {
    check_strength(strength)?;
    if strength == 0.0 {
        return Ok(plane.clone());
    }
    let spec = WgifSpec::new(DEFAULT_DENOISE_RADIUS, strength * strength)?;
    guided_filter(plane, plane, &spec)
}

/// Fuses the enhanced value channel with its denoised copy, weighting by the
/// normalized finest-scale residual.
pub fn suppress_noise(enh: &ValueEnhancement, denoiser: &DenoiserHandle) -> Result<ImagePlane> {
    let weight = normalize_residual(enh.stack.finest_residual());
    let denoised = denoiser.apply(&enh.value)?;
    fuse_denoised(&enh.value, &denoised, &weight)
}
