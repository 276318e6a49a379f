use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::{info, warn};
use rayon::prelude::*;
use veda_core::denoise::{suppress_noise, DenoiserHandle};
use veda_core::enhance::{multiscale_enhance_detailed, parameter_sweep};
use veda_core::imgcore::io::write_atomic;
use veda_core::imgcore::{dump_plane, load_image, save_image};
use veda_core::metrics::{evaluate, format_table, summarize, write_csv, write_csv_with, MetricReport};
use veda_core::ColorImage;

use crate::config::RunConfig;
use crate::files::{collect_inputs, index_by_stem, stem};
use crate::Outcome;

/// Name of the enhanced output for an input stem.
pub fn output_name(stem: &str) -> String {
    format!("{stem}.veda.png")
}

/// Name of an intermediate plane dump.
pub fn dump_name(stem: &str, sigma: f64, what: &str) -> String {
    format!("{stem}.s{sigma}.{what}.pfm")
}

struct Job<'a> {
    cfg: &'a RunConfig,
    denoiser: Option<DenoiserHandle>,
    references: Option<BTreeMap<String, PathBuf>>,
    sweep: bool,
}

/// Enhances (or sweeps) every input; per-file failures are reported and
/// processing continues.
pub fn enhance(inputs: &[PathBuf], cfg: &RunConfig, reference: Option<&Path>, sweep: bool) -> Result<Outcome> {
    let files = collect_inputs(inputs)?;
    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create output directory {}", cfg.out_dir.display()))?;
    let references = reference.map(|dir| index_by_stem(dir, None)).transpose()?;
    let denoiser = cfg.denoise.as_ref().map(|d| d.handle()).transpose()?;
    let job = Job {
        cfg,
        denoiser,
        references,
        sweep,
    };

    let results: Vec<Result<Option<MetricReport>>> =
        files.par_iter().map(|path| job.process(path)).collect();

    let mut failed = 0;
    let mut reports = Vec::new();
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(report) => reports.extend(report),
            Err(e) => {
                failed += 1;
                eprintln!("error: {}: {e:#}", path.display());
            }
        }
    }
    if job.references.is_some() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &reports)?;
        let csv_path = cfg.out_dir.join("metrics.csv");
        write_atomic(&csv_path, &buf)?;
        print_table(&reports);
        info!("wrote {}", csv_path.display());
    }
    info!("{} of {} inputs processed", files.len() - failed, files.len());
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Partial })
}

impl Job<'_> {
    fn process(&self, path: &Path) -> Result<Option<MetricReport>> {
        let img = load_image(path)?;
        let stem = stem(path);
        if self.sweep {
            self.sweep(&img, &stem)?;
            return Ok(None);
        }
        let out_dir = &self.cfg.out_dir;
        let out = multiscale_enhance_detailed(&img, &self.cfg.params)?;
        let image = match &self.denoiser {
            Some(handle) => out.recolor(&suppress_noise(&out.detail, handle)?)?,
            None => out.image.clone(),
        };
        let target = out_dir.join(output_name(&stem));
        save_image(&target, &image)?;
        info!("wrote {}", target.display());

        if self.cfg.dump {
            for layer in &out.detail.stack.layers {
                for (what, plane) in [
                    ("contrast", &layer.contrast),
                    ("residual", &layer.residual),
                    ("surround", &layer.surround),
                ] {
                    dump_plane(out_dir.join(dump_name(&stem, layer.sigma, what)), plane)?;
                }
            }
        }

        let Some(refs) = &self.references else {
            return Ok(None);
        };
        match refs.get(&stem) {
            Some(ref_path) => {
                let reference = load_image(ref_path)?;
                Ok(Some(evaluate(stem, &image, &reference, &img)?))
            }
            None => {
                warn!("no reference image for {stem}");
                Ok(None)
            }
        }
    }

    fn sweep(&self, img: &ColorImage, stem: &str) -> Result<()> {
        let cfg = self.cfg;
        let sweep = parameter_sweep(img, &cfg.gammas, &cfg.ks, &cfg.params)?;
        save_image(cfg.out_dir.join(format!("{stem}.sweep.png")), &sweep.mosaic()?)?;
        let mut buf = Vec::new();
        write_csv_with(
            &mut buf,
            &["gamma", "k"],
            sweep
                .cells
                .iter()
                .map(|c| (vec![c.gamma.to_string(), c.k.to_string()], &c.report)),
        )?;
        write_atomic(&cfg.out_dir.join(format!("{stem}.sweep.csv")), &buf)?;
        info!("swept {stem}: {} cells", sweep.cells.len());
        Ok(())
    }
}

/// Sweeps a single image file.
pub fn sweep(input: &Path, cfg: &RunConfig) -> Result<Outcome> {
    if !input.is_file() {
        bail!("sweep needs a single image file, got {}", input.display());
    }
    enhance(&[input.to_path_buf()], cfg, None, true)
}

/// Scores enhanced images against references matched by stem.
pub fn metrics(enhanced: &Path, reference: &Path, input: Option<&Path>, csv: Option<&Path>) -> Result<Outcome> {
    let outputs = index_by_stem(enhanced, Some(".veda"))?;
    let refs = index_by_stem(reference, None)?;
    let originals = input.map(|dir| index_by_stem(dir, None)).transpose()?;

    let mut pairs = Vec::new();
    for (key, path) in &outputs {
        match refs.get(key) {
            Some(r) => pairs.push((key.clone(), path.clone(), r.clone())),
            None => warn!("unmatched enhanced image {} (no reference {key:?})", path.display()),
        }
    }
    for key in refs.keys().filter(|k| !outputs.contains_key(*k)) {
        warn!("unmatched reference {key:?} (no enhanced image)");
    }
    if pairs.is_empty() {
        eprintln!(
            "error: no enhanced image in {} matches a reference in {}",
            enhanced.display(),
            reference.display()
        );
        return Ok(Outcome::Partial);
    }

    let results: Vec<Result<MetricReport>> = pairs
        .par_iter()
        .map(|(key, out_path, ref_path)| {
            let out = load_image(out_path)?;
            let reference = load_image(ref_path)?;
            let original = match &originals {
                None => reference.clone(),
                Some(idx) => match idx.get(key) {
                    Some(p) => load_image(p)?,
                    None => bail!("no original input for {key:?}"),
                },
            };
            Ok(evaluate(key.clone(), &out, &reference, &original)?)
        })
        .collect();

    let mut reports = Vec::new();
    let mut failed = 0;
    for ((key, ..), result) in pairs.iter().zip(results) {
        match result {
            Ok(r) => reports.push(r),
            Err(e) => {
                failed += 1;
                eprintln!("error: {key}: {e:#}");
            }
        }
    }
    match csv {
        Some(path) => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &reports)?;
            write_atomic(path, &buf)?;
            print_table(&reports);
        }
        None => {
            write_csv(std::io::stdout().lock(), &reports)?;
            eprint!("{}", table_with_summary(&reports));
        }
    }
    Ok(if failed == 0 && !reports.is_empty() {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}

fn table_with_summary(reports: &[MetricReport]) -> String {
    let mut rows = reports.to_vec();
    if !reports.is_empty() {
        rows.push(summarize(reports));
    }
    format_table(&rows)
}

fn print_table(reports: &[MetricReport]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(table_with_summary(reports).as_bytes());
}
