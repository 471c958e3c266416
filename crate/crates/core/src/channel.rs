//! Quasi-static fading coefficients and complex AWGN.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Phase of the line-of-sight component of a Rician fade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosPhase {
    /// Same deterministic phase on every link and frame.
    Fixed(f64),
    /// Independent uniform phase per link and frame.
    Uniform,
}

/// Fade distribution, normalized to E|h|² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    Rayleigh,
    Rician { k_factor_db: f64, los_phase: LosPhase },
}

impl FadingModel {
    /// Rician fading with a uniformly random LOS phase.
    pub fn rician(k_factor_db: f64) -> Self {
        Self::Rician {
            k_factor_db,
            los_phase: LosPhase::Uniform,
        }
    }

    /// Parses `rayleigh`, `rician:<K dB>` or `rician:<K dB>:fixed[=<rad>]`.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let mut parts = lower.split(':');
        let bad = || Error::Config(format!("invalid fading model '{s}'"));
        match parts.next() {
            Some("rayleigh") if parts.next().is_none() => Ok(Self::Rayleigh),
            Some("rician") => {
                let k: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
                if !k.is_finite() {
                    return Err(bad());
                }
                let los_phase = match parts.next().map(str::trim) {
                    None | Some("uniform") => LosPhase::Uniform,
                    Some("fixed") => LosPhase::Fixed(0.0),
                    Some(other) => {
                        let v = other.strip_prefix("fixed=").ok_or_else(bad)?;
                        LosPhase::Fixed(v.parse().map_err(|_| bad())?)
                    }
                };
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(Self::Rician {
                    k_factor_db: k,
                    los_phase,
                })
            }
            _ => Err(bad()),
        }
    }

    /// Short kind name used in CSV output.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Rayleigh => "rayleigh",
            Self::Rician { .. } => "rician",
        }
    }

    /// K factor in dB; `None` for Rayleigh.
    pub fn k_factor_db(&self) -> Option<f64> {
        match self {
            Self::Rayleigh => None,
            Self::Rician { k_factor_db, .. } => Some(*k_factor_db),
        }
    }

    /// Linear K factor (0 for Rayleigh).
    pub fn k_linear(&self) -> f64 {
        self.k_factor_db().map_or(0.0, |k| 10f64.powf(k / 10.0))
    }

    /// Draws one fade coefficient.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self {
            Self::Rayleigh => complex_gaussian(rng, 1.0),
            Self::Rician { los_phase, .. } => {
                let k = self.k_linear();
                let phase = match los_phase {
                    LosPhase::Fixed(p) => *p,
                    LosPhase::Uniform => rng.random_range(0.0..2.0 * PI),
                };
                let los = Complex64::from_polar((k / (k + 1.0)).sqrt(), phase);
                los + complex_gaussian(rng, 1.0 / (k + 1.0))
            }
        }
    }
}

impl std::fmt::Display for FadingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Rayleigh => write!(f, "rayleigh"),
            Self::Rician {
                k_factor_db,
                los_phase: LosPhase::Uniform,
            } => write!(f, "rician:{k_factor_db}"),
            Self::Rician {
                k_factor_db,
                los_phase: LosPhase::Fixed(p),
            } => write!(f, "rician:{k_factor_db}:fixed={p}"),
        }
    }
}

/// Circularly symmetric complex Gaussian with E|z|² = `variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// `dim` i.i.d. CN(0, variance) samples.
pub fn awgn<R: Rng + ?Sized>(rng: &mut R, dim: usize, variance: f64) -> Vec<Complex64> {
    (0..dim).map(|_| complex_gaussian(rng, variance)).collect()
}

/// Fades of one protocol frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRealization {
    /// A to relay.
    pub h_a: Complex64,
    /// B to relay.
    pub h_b: Complex64,
    /// Relay to A.
    pub g_a: Complex64,
    /// Relay to B.
    pub g_b: Complex64,
}

impl ChannelRealization {
    /// Draws all four links independently.
    pub fn draw<R: Rng + ?Sized>(model: &FadingModel, rng: &mut R) -> Self {
        Self {
            h_a: model.draw(rng),
            h_b: model.draw(rng),
            g_a: model.draw(rng),
            g_b: model.draw(rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: usize = 1_000_000;

    fn moments(model: FadingModel, seed: u64) -> (f64, Complex64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = 0.0;
        let mut m = Complex64::new(0.0, 0.0);
        for _ in 0..N {
            let h = model.draw(&mut rng);
            p += h.norm_sqr();
            m += h;
        }
        (p / N as f64, m / N as f64)
    }

    #[test]
    fn rayleigh_unit_power() {
        let (p, m) = moments(FadingModel::Rayleigh, 1);
        assert!((p - 1.0).abs() < 0.01);
        assert!(m.norm() < 0.01);
    }

    #[test]
    fn rician_k0_fixed_phase_mean() {
        let model = FadingModel::Rician {
            k_factor_db: 0.0,
            los_phase: LosPhase::Fixed(0.0),
        };
        let (p, m) = moments(model, 2);
        assert!((p - 1.0).abs() < 0.01);
        assert!((m.norm_sqr() - 0.5).abs() < 0.01);
    }

    #[test]
    fn rician_uniform_phase_unit_power() {
        let (p, m) = moments(FadingModel::rician(5.0), 3);
        assert!((p - 1.0).abs() < 0.01);
        assert!(m.norm() < 0.01);
    }

    #[test]
    fn strong_los_limit() {
        let model = FadingModel::Rician {
            k_factor_db: 80.0,
            los_phase: LosPhase::Fixed(0.0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            assert!((model.draw(&mut rng) - 1.0).norm() < 0.01);
        }
    }

    #[test]
    fn awgn_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = awgn(&mut rng, N, 1.0);
        let p = z.iter().map(|v| v.norm_sqr()).sum::<f64>() / N as f64;
        assert!((p - 1.0).abs() < 0.01);
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for v in &z {
            sxy += v.re * v.im;
            sxx += v.re * v.re;
            syy += v.im * v.im;
        }
        assert!((sxy / (sxx * syy).sqrt()).abs() < 0.01);
        let tiny = awgn(&mut rng, 10, 1e-30);
        assert!(tiny.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn deterministic_given_seed() {
        let m = FadingModel::rician(0.0);
        let a = ChannelRealization::draw(&m, &mut ChaCha8Rng::seed_from_u64(9));
        let b = ChannelRealization::draw(&m, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn parse_models() {
        assert_eq!(FadingModel::parse("Rayleigh").unwrap(), FadingModel::Rayleigh);
        assert_eq!(FadingModel::parse("rician:5").unwrap(), FadingModel::rician(5.0));
        assert_eq!(
            FadingModel::parse("rician:0:fixed").unwrap(),
            FadingModel::Rician { k_factor_db: 0.0, los_phase: LosPhase::Fixed(0.0) }
        );
        assert_eq!(
            FadingModel::parse("rician:3:fixed=1.5").unwrap(),
            FadingModel::Rician { k_factor_db: 3.0, los_phase: LosPhase::Fixed(1.5) }
        );
        assert!(FadingModel::parse("rician").is_err());
        assert!(FadingModel::parse("nakagami").is_err());
        for m in [FadingModel::Rayleigh, FadingModel::rician(5.0), FadingModel::parse("rician:3:fixed=1.5").unwrap()] {
            assert_eq!(FadingModel::parse(&m.to_string()).unwrap(), m);
        }
    }
}
