//! Run configuration: command-line flags over a `key=value` config file over
//! the built-in defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use veda_core::denoise::{DenoiserHandle, DEFAULT_DENOISE_STRENGTH};
use veda_core::enhance::{default_gamma_grid, default_k_grid, VedaParams};

use crate::args::{GridArgs, ParamArgs};

const KEYS: &[&str] = &[
    "gamma",
    "k",
    "m",
    "g",
    "sigmas",
    "surround",
    "contrast",
    "out",
    "denoise",
    "denoiser_cmd",
    "dump",
    "gammas",
    "ks",
    "threads",
];

/// Parses a finite number; `ln(x)` with `x > 0` is accepted as well.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_prefix("ln(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => {
            let x: f64 = inner
                .trim()
                .parse()
                .map_err(|_| format!("invalid number {inner:?} in {s:?}"))?;
            if !(x > 0.0) {
                return Err(format!("ln argument must be positive in {s:?}"));
            }
            x.ln()
        }
        None => s.parse().map_err(|_| format!("invalid number {s:?}"))?,
    };
    if !value.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(value)
}

/// Parses a non-empty comma-separated list of numbers.
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let items: Vec<f64> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_number)
        .collect::<std::result::Result<_, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Some(true),
        "0" | "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

/// Contents of a config file: `key = value` lines, `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value, got {line:?}", n + 1))?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key {key:?}", n + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| parse(v).map_err(|e| anyhow!("{key}: {e}")))
            .transpose()
    }

    fn get_str<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key, |v| v.parse::<T>().map_err(|e| e.to_string()))
    }
}

/// How the value channel is denoised before fusion.
#[derive(Debug, Clone, PartialEq)]
pub enum DenoiseMode {
    Guided(f64),
    /// Program followed by its arguments.
    External(Vec<String>),
}

impl DenoiseMode {
    pub fn handle(&self) -> Result<DenoiserHandle> {
        Ok(match self {
            DenoiseMode::Guided(strength) => DenoiserHandle::guided(*strength)?,
            DenoiseMode::External(argv) => DenoiserHandle::external(argv[0].clone(), argv[1..].to_vec()),
        })
    }
}

/// Flags that only `enhance` accepts.
#[derive(Debug, Clone, Default)]
pub struct EnhanceFlags {
    pub denoise: Option<Option<f64>>,
    pub denoiser_cmd: Option<String>,
    pub dump: bool,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: VedaParams,
    pub out_dir: PathBuf,
    pub denoise: Option<DenoiseMode>,
    pub dump: bool,
    pub gammas: Vec<f64>,
    pub ks: Vec<f64>,
    /// Thread count from the config file; flags and `VEDA_THREADS` win.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn resolve(params: &ParamArgs, grid: &GridArgs, flags: &EnhanceFlags) -> Result<Self> {
        let file = match &params.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::layer(&file, params, grid, flags)
    }

    fn layer(file: &ConfigFile, a: &ParamArgs, grid: &GridArgs, flags: &EnhanceFlags) -> Result<Self> {
        let mut p = VedaParams::default();
        let pick = |flag: Option<f64>, key: &str, default: f64| -> Result<f64> {
            Ok(flag.or(file.get(key, parse_number)?).unwrap_or(default))
        };
        p.gamma = pick(a.gamma, "gamma", p.gamma)?;
        p.k = pick(a.k, "k", p.k)?;
        p.m = pick(a.m, "m", p.m)?;
        p.g = pick(a.g, "g", p.g)?;
        if let Some(s) = a.sigmas.clone().or(file.get("sigmas", parse_list)?) {
            p.sigmas = s;
        }
        if let Some(s) = a.surround.or(file.get_str("surround")?) {
            p.surround = s;
        }
        if let Some(c) = a.contrast.or(file.get_str("contrast")?) {
            p.contrast = c;
        }
        p.validate()?;

        let out_dir = a
            .out
            .clone()
            .or(file.values.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));

        let gammas = grid
            .gammas
            .clone()
            .or(file.get("gammas", parse_list)?)
            .unwrap_or_else(default_gamma_grid);
        let ks = grid
            .ks
            .clone()
            .or(file.get("ks", parse_list)?)
            .unwrap_or_else(default_k_grid);
        if let Some(bad) = gammas.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
            bail!("sweep gamma {bad} is outside (0, 1]");
        }

        let dump = flags.dump
            || file
                .get("dump", |v| parse_bool(v).ok_or_else(|| format!("expected a boolean, got {v:?}")))?
                .unwrap_or(false);

        let command = flags
            .denoiser_cmd
            .clone()
            .or(file.values.get("denoiser_cmd").cloned());
        let denoise = match command {
            Some(cmd) => {
                let argv: Vec<String> = cmd.split_whitespace().map(String::from).collect();
                if argv.is_empty() {
                    bail!("denoiser command is empty");
                }
                Some(DenoiseMode::External(argv))
            }
            None => match flags.denoise {
                Some(strength) => Some(DenoiseMode::Guided(strength.unwrap_or(DEFAULT_DENOISE_STRENGTH))),
                None => file.get("denoise", |v| match parse_bool(v) {
                    Some(true) => Ok(Some(DEFAULT_DENOISE_STRENGTH)),
                    Some(false) => Ok(None),
                    None => parse_number(v).map(Some),
                })?
                .flatten()
                .map(DenoiseMode::Guided),
            },
        };
        if let Some(DenoiseMode::Guided(s)) = denoise {
            if !(s >= 0.0) {
                bail!("denoise strength must be >= 0, got {s}");
            }
        }

        let threads = file.get("threads", |v| {
            v.trim().parse::<usize>().map_err(|_| format!("invalid thread count {v:?}"))
        })?;

        Ok(Self {
            params: p,
            out_dir,
            denoise,
            dump,
            gammas,
            ks,
            threads,
        })
    }
}
