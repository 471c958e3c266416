//! Monte-Carlo BER sweeps.
//!
//! Every frame draws from its own ChaCha8 stream: the key depends on
//! (master seed, SNR index) and the stream number is the frame index. Frames
//! are processed in fixed-size chunks and the stopping rule is evaluated only
//! between chunks, so results do not depend on the number of worker threads.
//! All schemes share the same per-frame streams, so at equal seeds they see
//! the same fades.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, FadingModel};
use crate::constellation::SignalSet;
use crate::dstc::DstcDesign;
use crate::error::{Error, Result};
use crate::protocol::{run_frame_dnf_xor, run_frame_dstc, FrameResult};
use crate::relay_decoder::DecoderKind;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Which relaying scheme to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    DnfXor,
    Dstc { design: String },
}

impl Scheme {
    /// Parses `dnf_xor` (or `xor`) and `dstc:<design name>`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "dnf_xor" | "xor" | "dnf-xor") {
            return Ok(Self::DnfXor);
        }
        if let Some(rest) = t.strip_prefix("dstc:").or_else(|| t.strip_prefix("DSTC:")) {
            DstcDesign::from_name(rest)?;
            return Ok(Self::Dstc {
                design: rest.trim().to_string(),
            });
        }
        Err(Error::Config(format!("unknown scheme '{t}'")))
    }

    /// Value of the `scheme` CSV column.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::DnfXor => "dnf_xor",
            Self::Dstc { .. } => "dstc",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::DnfXor => write!(f, "dnf_xor"),
            Self::Dstc { design } => write!(f, "dstc:{design}"),
        }
    }
}

/// One sweep: a scheme over a list of SNR points.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub decoder: DecoderKind,
    pub signal_set: String,
    pub fading: FadingModel,
    pub snr_db: Vec<f64>,
    pub max_frames: u64,
    /// Stop a point once this many bit errors are seen; 0 always runs
    /// `max_frames`.
    pub min_bit_errors: u64,
    pub master_seed: u64,
    pub workers: usize,
    /// Frames per chunk between stopping checks.
    pub chunk_frames: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::DnfXor,
            decoder: DecoderKind::Conditional,
            signal_set: "qpsk".into(),
            fading: FadingModel::Rayleigh,
            snr_db: vec![0.0, 10.0, 20.0, 30.0],
            max_frames: 10_000_000,
            min_bit_errors: 200,
            master_seed: 0,
            workers: 1,
            chunk_frames: 4096,
        }
    }
}

/// One row of sweep output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub scheme: String,
    pub design: String,
    pub signal_set: String,
    pub fading: String,
    pub k_factor_db: Option<f64>,
    pub snr_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval for `k` successes out of `n` at normal quantile `z`.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if p == 1.0 { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Key for SNR point `snr_index`: four splitmix64 outputs starting from
/// `master_seed ^ (snr_index · 0xD1B54A32D192ED03)`.
pub fn point_key(master_seed: u64, snr_index: usize) -> [u8; 32] {
    let mut st = master_seed ^ (snr_index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut st).to_le_bytes());
    }
    key
}

/// The RNG for one frame.
pub fn frame_rng(key: &[u8; 32], frame_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(frame_index);
    rng
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    frames: u64,
    bits: u64,
    errors: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            bits: self.bits + o.bits,
            errors: self.errors + o.errors,
        }
    }

    fn from_frame(r: &FrameResult) -> Tally {
        Tally {
            frames: 1,
            bits: r.bits(),
            errors: r.bit_errors(),
        }
    }
}

enum Runner {
    Xor,
    Dstc(DstcDesign, DecoderKind),
}

impl SimConfig {
    /// Checks ranges and resolves names.
    pub fn validate(&self) -> Result<()> {
        self.resolve().map(|_| ())
    }

    fn resolve(&self) -> Result<(SignalSet, Runner)> {
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("SNR list is empty".into()));
        }
        if self.snr_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("SNR values must be finite".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.chunk_frames == 0 {
            return Err(Error::Config("chunk_frames must be at least 1".into()));
        }
        let s = SignalSet::from_descriptor(&self.signal_set)?;
        let runner = match &self.scheme {
            Scheme::DnfXor => Runner::Xor,
            Scheme::Dstc { design } => {
                let d = DstcDesign::from_name(design)?;
                self.decoder.check(&d, &s)?;
                Runner::Dstc(d, self.decoder)
            }
        };
        Ok((s, runner))
    }
}

fn run_frame(
    runner: &Runner,
    s: &SignalSet,
    fading: &FadingModel,
    es: f64,
    key: &[u8; 32],
    frame: u64,
) -> Result<Tally> {
    let mut rng = frame_rng(key, frame);
    let ch = ChannelRealization::draw(fading, &mut rng);
    let r = match runner {
        Runner::Xor => run_frame_dnf_xor(s, es, &ch, &mut rng)?,
        Runner::Dstc(d, dec) => run_frame_dstc(d, s, es, &ch, &mut rng, *dec)?,
    };
    Ok(Tally::from_frame(&r))
}

/// Runs the sweep. Output depends only on the config minus `workers`.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<BerRecord>> {
    let (s, runner) = cfg.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let design = match &cfg.scheme {
        Scheme::DnfXor => "xor".to_string(),
        Scheme::Dstc { .. } => match &runner {
            Runner::Dstc(d, _) => d.name().to_string(),
            Runner::Xor => unreachable!(),
        },
    };
    let mut out = Vec::with_capacity(cfg.snr_db.len());
    for (si, &snr) in cfg.snr_db.iter().enumerate() {
        let es = 10f64.powf(snr / 10.0);
        let key = point_key(cfg.master_seed, si);
        let mut total = Tally::default();
        let mut start = 0u64;
        while start < cfg.max_frames && (cfg.min_bit_errors == 0 || total.errors < cfg.min_bit_errors) {
            let end = (start + cfg.chunk_frames).min(cfg.max_frames);
            let chunk = pool.install(|| {
                (0..(end - start) as usize)
                    .into_par_iter()
                    .with_min_len(256)
                    .map(|i| run_frame(&runner, &s, &cfg.fading, es, &key, start + i as u64))
                    .try_reduce(Tally::default, |a, b| Ok(a.add(b)))
            })?;
            total = total.add(chunk);
            start = end;
        }
        let ber = if total.bits == 0 {
            0.0
        } else {
            total.errors as f64 / total.bits as f64
        };
        let (lo, hi) = wilson(total.errors, total.bits, Z_95);
        log::info!(
            "{} {} snr={snr} dB frames={} errors={} ber={ber:.3e}",
            cfg.scheme,
            s.name(),
            total.frames,
            total.errors
        );
        out.push(BerRecord {
            scheme: cfg.scheme.kind_name().to_string(),
            design: design.clone(),
            signal_set: s.name().to_string(),
            fading: cfg.fading.kind_name().to_string(),
            k_factor_db: cfg.fading.k_factor_db(),
            snr_db: snr,
            frames: total.frames,
            bits: total.bits,
            bit_errors: total.errors,
            ber,
            ci_low: lo,
            ci_high: hi,
        });
    }
    Ok(out)
}

/// Least-squares slope of log10(BER) against SNR in dB, in decades per
/// 10 dB. Records with zero BER are skipped.
pub fn estimate_diversity_slope(records: &[BerRecord]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.ber > 0.0)
        .map(|r| (r.snr_db, r.ber.log10()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(
            "need at least two records with nonzero BER".into(),
        ));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all SNR values are equal".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(10.0 * sxy / sxx)
}

/// SNR in dB at which the curve first falls to `target`, by linear
/// interpolation of log10(BER) between neighbouring points.
pub fn crossing_snr(records: &[BerRecord], target: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = records.iter().map(|r| (r.snr_db, r.ber)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lt = target.log10();
    for w in pts.windows(2) {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        if b0 >= target && b1 <= target {
            if b1 <= 0.0 || b0 == b1 {
                return if b0 == target { Some(x0) } else if b1 == target { Some(x1) } else { None };
            }
            let (l0, l1) = (b0.log10(), b1.log10());
            return Some(x0 + (lt - l0) * (x1 - x0) / (l1 - l0));
        }
    }
    None
}
