use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Extensions picked up when scanning a directory.
pub const IMAGE_EXTENSIONS: [&str; 4] = ["png", "ppm", "pgm", "pnm"];

pub fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Image files directly inside `dir`, sorted by path.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot read directory {}", dir.display()))? {
        let path = entry
            .with_context(|| format!("cannot read directory {}", dir.display()))?
            .path();
        if path.is_file() && is_image(&path) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Expands files and directories into the list of images to process.
///
/// Missing paths and two inputs with the same stem (which would write the
/// same output) are configuration errors.
pub fn collect_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            files.extend(list_images(p)?);
        } else if p.exists() {
            files.push(p.clone());
        } else {
            bail!("input {} does not exist", p.display());
        }
    }
    let mut seen: BTreeMap<String, &PathBuf> = BTreeMap::new();
    for f in &files {
        if let Some(prev) = seen.insert(stem(f), f) {
            bail!(
                "inputs {} and {} share the stem {:?}",
                prev.display(),
                f.display(),
                stem(f)
            );
        }
    }
    if files.is_empty() {
        bail!("no input images found");
    }
    Ok(files)
}

/// Maps stems to files in `dir`; a trailing `suffix` on a stem is dropped
/// first (so `a.veda.png` indexes as `a`).
pub fn index_by_stem(dir: &Path, suffix: Option<&str>) -> Result<BTreeMap<String, PathBuf>> {
    let mut index = BTreeMap::new();
    for path in list_images(dir)? {
        let mut key = stem(&path);
        if let Some(s) = suffix {
            if let Some(base) = key.strip_suffix(s) {
                key = base.to_string();
            }
        }
        if let Some(prev) = index.insert(key.clone(), path.clone()) {
            log::warn!(
                "{} and {} both match stem {key:?}; using the latter",
                prev.display(),
                path.display()
            );
        }
    }
    Ok(index)
}
