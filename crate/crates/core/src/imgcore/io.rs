//! File IO: 8-bit PNG / PPM / PGM through the `image` crate, and a small
//! hand-written PFM codec for float plane dumps.
//!
//! Every writer goes through [`write_atomic`], so a crashed run never
//! leaves a truncated output behind.

use std::fs;
use std::io::{Cursor, Write};
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};

use crate::error::{Error, Result};
use crate::imgcore::{ColorImage, ColorSpace, ImagePlane};

/// Largest accepted pixel count (width × height).
pub const MAX_PIXELS: usize = 1 << 28;

/// Decodes an 8-bit PNG / PPM / PGM file into an RGB image in `[0, 1]`.
///
/// Single-channel inputs are promoted to three identical channels.
pub fn load_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let format = image::guess_format(&bytes)
        .map_err(|e| Error::format(path, format!("unrecognized image format: {e}")))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Pnm) {
        return Err(Error::format(
            path,
            format!("unsupported image format {format:?}"),
        ));
    }
    let decoded = image::load_from_memory_with_format(&bytes, format)
        .map_err(|e| Error::format(path, e.to_string()))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    match w.checked_mul(h) {
        Some(n) if n <= MAX_PIXELS => {}
        _ => {
            return Err(Error::format(
                path,
                format!("image dimensions {w}x{h} exceed the supported size"),
            ))
        }
    }
    let img = match decoded {
        DynamicImage::ImageLuma8(_) | DynamicImage::ImageLumaA8(_) => {
            let gray = decoded.into_luma8();
            let plane = ImagePlane::from_raw(
                w,
                h,
                gray.as_raw().iter().map(|&v| v as f64 / 255.0).collect(),
            );
            ColorImage::from_gray(plane)?
        }
        other => ColorImage::from_rgb8(w, h, other.into_rgb8().as_raw())?,
    };
    Ok(img)
}

/// Encodes an RGB image; the format follows the file extension
/// (`png`, `ppm`, `pgm`, `pnm`).
pub fn save_image(path: impl AsRef<Path>, img: &ColorImage) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_image(img, format_for(path)?, path)?;
    write_atomic(path, &bytes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputKind {
    Png,
    Ppm,
    Pgm,
}

fn format_for(path: &Path) -> Result<OutputKind> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("png") => Ok(OutputKind::Png),
        Some("ppm") | Some("pnm") => Ok(OutputKind::Ppm),
        Some("pgm") => Ok(OutputKind::Pgm),
        _ => Err(Error::format(path, "unsupported output extension")),
    }
}

fn encode_image(img: &ColorImage, kind: OutputKind, path: &Path) -> Result<Vec<u8>> {
    if img.space() != ColorSpace::Rgb {
        return Err(Error::Usage("save_image expects an RGB image".into()));
    }
    let (w, h) = (img.width() as u32, img.height() as u32);
    let dynamic = if kind == OutputKind::Pgm {
        if !img.is_gray() {
            return Err(Error::format(path, "PGM output needs a gray image"));
        }
        let gray: Vec<u8> = img
            .plane(0)
            .data()
            .iter()
            .map(|&v| super::color::quantize(v))
            .collect();
        DynamicImage::ImageLuma8(
            image::GrayImage::from_raw(w, h, gray).expect("buffer sized from image"),
        )
    } else {
        DynamicImage::ImageRgb8(
            image::RgbImage::from_raw(w, h, img.to_rgb8()).expect("buffer sized from image"),
        )
    };
    let format = match kind {
        OutputKind::Png => ImageFormat::Png,
        OutputKind::Ppm | OutputKind::Pgm => ImageFormat::Pnm,
    };
    let mut buf = Cursor::new(Vec::new());
    dynamic
        .write_to(&mut buf, format)
        .map_err(|e| Error::format(path, e.to_string()))?;
    Ok(buf.into_inner())
}

/// Writes a single plane as a little-endian grayscale PFM (`Pf`, scale `-1.0`).
///
/// Samples are stored as `f32`, bottom row first.
pub fn dump_plane(path: impl AsRef<Path>, plane: &ImagePlane) -> Result<()> {
    write_atomic(path.as_ref(), &encode_pfm(plane))
}

pub fn encode_pfm(plane: &ImagePlane) -> Vec<u8> {
    let (w, h) = plane.dims();
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 4);
    for y in (0..h).rev() {
        for &v in plane.row(y) {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    out
}

/// Reads a PFM file; `Pf` yields one plane, `PF` yields three (R, G, B).
pub fn read_pfm(path: impl AsRef<Path>) -> Result<Vec<ImagePlane>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pfm(&bytes).map_err(|msg| Error::format(path, msg))
}

pub fn decode_pfm(bytes: &[u8]) -> std::result::Result<Vec<ImagePlane>, String> {
    // header: three whitespace-separated tokens then exactly one whitespace byte
    let mut pos = 0;
    let mut tokens = Vec::with_capacity(4);
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated PFM header".into());
        }
        tokens.push(std::str::from_utf8(&bytes[start..pos]).map_err(|e| e.to_string())?);
    }
    pos += 1;
    let channels = match tokens[0] {
        "Pf" => 1,
        "PF" => 3,
        other => return Err(format!("bad PFM magic {other:?}")),
    };
    let width: usize = tokens[1].parse().map_err(|_| "bad PFM width")?;
    let height: usize = tokens[2].parse().map_err(|_| "bad PFM height")?;
    let scale: f32 = tokens[3].parse().map_err(|_| "bad PFM scale")?;
    if scale == 0.0 || !scale.is_finite() {
        return Err("PFM scale must be finite and non-zero".into());
    }
    let little_endian = scale < 0.0;
    let n = width
        .checked_mul(height)
        .filter(|&n| n <= MAX_PIXELS)
        .ok_or("PFM dimensions too large")?;
    let need = n * channels * 4;
    let body = bytes.get(pos..).unwrap_or(&[]);
    if body.len() < need {
        return Err(format!(
            "PFM body has {} bytes, expected {need}",
            body.len()
        ));
    }
    let mut planes = vec![vec![0.0f64; n]; channels];
    for (i, chunk) in body[..need].chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little_endian {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        let pixel = i / channels;
        let c = i % channels;
        let (x, file_row) = (pixel % width, pixel / width);
        let y = height - 1 - file_row;
        planes[c][y * width + x] = v as f64;
    }
    planes
        .into_iter()
        .map(|d| ImagePlane::new(width, height, d).map_err(|e| e.to_string()))
        .collect()
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = temp_sibling(path);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

fn temp_sibling(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp_name = format!(".{name}.{}.tmp", std::process::id());
    match path.parent() {
        Some(dir) => dir.join(tmp_name),
        None => PathBuf::from(tmp_name),
    }
}
