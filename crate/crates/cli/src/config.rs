//! Flat `key = value` run configuration.
//!
//! ```text
//! # 4-PSK over Rayleigh fading
//! sim.schemes        = dnf_xor dstc:construction1 dstc:construction2
//! sim.signal_set     = qpsk
//! sim.snr_db         = 10:2:40
//! channel.fading     = rayleigh
//! output.csv         = rayleigh.csv
//! ```
//!
//! Lines starting with `#` are comments. Unknown and repeated keys are
//! errors. `sim.snr_db` takes either a comma/space separated list or
//! `start:step:stop` (inclusive).

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use dstc_relay::channel::{FadingModel, LosPhase};
use dstc_relay::relay_decoder::DecoderKind;
use dstc_relay::sim::{Scheme, SimConfig};

pub const KEYS: &[(&str, &str)] = &[
    ("sim.schemes", "whitespace separated: dnf_xor, dstc:<design>"),
    ("sim.decoder", "brute | conditional | qam_fast (default conditional)"),
    ("sim.signal_set", "bpsk, qpsk, 8psk, 16qam, ... (default qpsk)"),
    ("sim.snr_db", "list or start:step:stop"),
    ("sim.max_frames", "frame cap per SNR point (default 10000000)"),
    ("sim.min_bit_errors", "stop a point after this many bit errors (default 200)"),
    ("sim.chunk_frames", "frames between stopping checks (default 4096)"),
    ("sim.seed", "master seed (default 0)"),
    ("sim.workers", "worker threads (default 1)"),
    ("channel.fading", "rayleigh | rician (default rayleigh)"),
    ("channel.k_factor_db", "Rician K factor in dB"),
    ("channel.los_phase", "uniform | fixed | <radians> (default uniform)"),
    ("output.csv", "CSV path, relative to the config file"),
];

/// A parsed run description covering one or more schemes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub schemes: Vec<Scheme>,
    pub base: SimConfig,
    pub output_csv: Option<PathBuf>,
    /// Effective key/value pairs, for the manifest.
    pub entries: BTreeMap<String, String>,
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .with_context(|| format!("{key}: '{v}' is not a number"))?;
    if !x.is_finite() {
        bail!("{key}: '{v}' is not finite");
    }
    Ok(x)
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    let t: String = v.trim().chars().filter(|c| *c != '_').collect();
    if let Ok(n) = t.parse() {
        return Ok(n);
    }
    // Allow 1e7 style integers.
    let x: f64 = t
        .parse()
        .map_err(|_| anyhow!("{key}: '{v}' is not a nonnegative integer"))?;
    if x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 {
        Ok(x as u64)
    } else {
        bail!("{key}: '{v}' is not a nonnegative integer")
    }
}

/// Parses `a:step:b` (inclusive) or a list separated by commas or spaces.
pub fn parse_snr_list(v: &str) -> Result<Vec<f64>> {
    let v = v.trim();
    if v.contains(':') {
        let parts: Vec<&str> = v.split(':').collect();
        if parts.len() != 3 {
            bail!("sim.snr_db: range must be start:step:stop");
        }
        let a = parse_f64("sim.snr_db", parts[0])?;
        let step = parse_f64("sim.snr_db", parts[1])?;
        let b = parse_f64("sim.snr_db", parts[2])?;
        if step <= 0.0 || b < a {
            bail!("sim.snr_db: need step > 0 and stop >= start");
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        if n > 100_000 {
            bail!("sim.snr_db: range has too many points");
        }
        return Ok((0..=n).map(|i| a + step * i as f64).collect());
    }
    let out: Vec<f64> = v
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_f64("sim.snr_db", t))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("sim.snr_db is empty");
    }
    Ok(out)
}

/// Splits the text into a key map, rejecting unknown or repeated keys.
pub fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
        let k = k.trim().to_string();
        let v = match v.split_once(" #") {
            Some((val, _)) => val.trim(),
            None => v.trim(),
        };
        if !KEYS.iter().any(|(name, _)| *name == k) {
            bail!("line {}: unknown key '{k}'", n + 1);
        }
        if map.insert(k.clone(), v.to_string()).is_some() {
            bail!("line {}: key '{k}' given twice", n + 1);
        }
    }
    Ok(map)
}

impl RunConfig {
    #[cfg(test)]
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(parse_entries(text)?)
    }

    pub fn from_entries(entries: BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| entries.get(k).map(String::as_str);
        let mut base = SimConfig::default();

        let schemes: Vec<Scheme> = get("sim.schemes")
            .ok_or_else(|| anyhow!("sim.schemes is required"))?
            .split_whitespace()
            .map(|s| Scheme::parse(s).map_err(anyhow::Error::from))
            .collect::<Result<_>>()?;
        if schemes.is_empty() {
            bail!("sim.schemes is empty");
        }
        if let Some(v) = get("sim.decoder") {
            base.decoder = DecoderKind::parse(v)?;
        }
        if let Some(v) = get("sim.signal_set") {
            base.signal_set = v.to_string();
        }
        base.snr_db = parse_snr_list(get("sim.snr_db").ok_or_else(|| anyhow!("sim.snr_db is required"))?)?;
        if let Some(v) = get("sim.max_frames") {
            base.max_frames = parse_u64("sim.max_frames", v)?;
        }
        if let Some(v) = get("sim.min_bit_errors") {
            base.min_bit_errors = parse_u64("sim.min_bit_errors", v)?;
        }
        if let Some(v) = get("sim.chunk_frames") {
            base.chunk_frames = parse_u64("sim.chunk_frames", v)?;
        }
        if let Some(v) = get("sim.seed") {
            base.master_seed = parse_u64("sim.seed", v)?;
        }
        if let Some(v) = get("sim.workers") {
            base.workers = parse_u64("sim.workers", v)? as usize;
        }
        base.fading = match get("channel.fading").unwrap_or("rayleigh").to_ascii_lowercase().as_str() {
            "rayleigh" => {
                if get("channel.k_factor_db").is_some() || get("channel.los_phase").is_some() {
                    bail!("channel.k_factor_db and channel.los_phase need channel.fading = rician");
                }
                FadingModel::Rayleigh
            }
            "rician" => {
                let k = parse_f64(
                    "channel.k_factor_db",
                    get("channel.k_factor_db").ok_or_else(|| anyhow!("channel.k_factor_db is required for rician"))?,
                )?;
                let los_phase = match get("channel.los_phase").map(str::trim) {
                    None | Some("uniform") => LosPhase::Uniform,
                    Some("fixed") => LosPhase::Fixed(0.0),
                    Some(v) => LosPhase::Fixed(parse_f64("channel.los_phase", v)?),
                };
                FadingModel::Rician { k_factor_db: k, los_phase }
            }
            other => bail!("channel.fading: unknown model '{other}'"),
        };
        let output_csv = get("output.csv").map(PathBuf::from);
        let cfg = Self {
            schemes,
            base,
            output_csv,
            entries,
        };
        for c in cfg.sim_configs() {
            c.validate()?;
        }
        Ok(cfg)
    }

    /// One sweep per scheme.
    pub fn sim_configs(&self) -> Vec<SimConfig> {
        self.schemes
            .iter()
            .map(|s| SimConfig {
                scheme: s.clone(),
                ..self.base.clone()
            })
            .collect()
    }
}
