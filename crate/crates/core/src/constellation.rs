//! Unit-energy signal sets, bit labelings and difference constellations.
//!
//! Every constellation in this crate is stored as an indexed list of points
//! together with a bijective bit labeling. Symbol indices are what the
//! decoders and the protocol simulation pass around; labels only matter when
//! bits are counted or XORed at the relay.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used when deciding whether two constellation points coincide.
pub const POINT_TOL: f64 = 1e-12;

/// Constellation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Psk,
    SquareQam,
    Custom,
}

/// Geometry of a square QAM grid, used by the rounding decoders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QamGrid {
    /// Number of PAM levels per axis (√M).
    pub side: usize,
    /// Normalization factor 1/√E applied to the odd-integer grid.
    pub scale: f64,
}

impl QamGrid {
    /// Amplitude of PAM level `i` along one axis.
    pub fn level(&self, i: usize) -> f64 {
        (2.0 * i as f64 - (self.side as f64 - 1.0)) * self.scale
    }

    /// Nearest PAM level index to the coordinate `u`, clamped to the alphabet.
    /// Ties are rounded away from zero.
    pub fn nearest_level(&self, u: f64) -> usize {
        let v = u / self.scale;
        let t = (v + (self.side as f64 - 1.0)) / 2.0;
        let r = if v >= 0.0 { (t + 0.5).floor() } else { (t - 0.5).ceil() };
        if r.is_nan() || r <= 0.0 {
            0
        } else if r >= (self.side - 1) as f64 {
            self.side - 1
        } else {
            r as usize
        }
    }
}

/// A unit average energy constellation with a bit labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    name: String,
    kind: SignalKind,
    bits_per_symbol: u32,
    points: Vec<Complex64>,
    /// `labels[i]` is the bit label of `points[i]`.
    labels: Vec<u32>,
    /// `by_label[l]` is the index of the point labeled `l`.
    by_label: Vec<usize>,
    qam: Option<QamGrid>,
}

fn gray(k: u32) -> u32 {
    k ^ (k >> 1)
}

impl SignalSet {
    /// Builds a custom signal set from points and labels and validates it.
    pub fn custom(name: &str, points: Vec<Complex64>, labels: Vec<u32>) -> Result<Self> {
        Self::build(name.to_string(), SignalKind::Custom, points, labels, None)
    }

    fn build(
        name: String,
        kind: SignalKind,
        points: Vec<Complex64>,
        labels: Vec<u32>,
        qam: Option<QamGrid>,
    ) -> Result<Self> {
        let m = points.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidSignalSet(format!(
                "{m} points is not a power of two >= 2"
            )));
        }
        if labels.len() != m {
            return Err(Error::InvalidSignalSet("label count mismatch".into()));
        }
        let bits_per_symbol = m.trailing_zeros();
        let mut by_label = vec![usize::MAX; m];
        for (i, &l) in labels.iter().enumerate() {
            if l as usize >= m || by_label[l as usize] != usize::MAX {
                return Err(Error::InvalidSignalSet(format!(
                    "labeling is not a bijection (label {l})"
                )));
            }
            by_label[l as usize] = i;
        }
        for i in 0..m {
            for j in 0..i {
                if (points[i] - points[j]).norm() <= POINT_TOL {
                    return Err(Error::InvalidSignalSet(format!(
                        "points {j} and {i} coincide"
                    )));
                }
            }
        }
        let energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / m as f64;
        if (energy - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSignalSet(format!(
                "average energy {energy} is not 1"
            )));
        }
        Ok(Self {
            name,
            kind,
            bits_per_symbol,
            points,
            labels,
            by_label,
            qam,
        })
    }

    /// 2^λ-PSK with points e^{j2πk/M} and Gray labeling along the circle.
    ///
    /// For λ = 2 this is {1, j, -1, -j}.
    pub fn psk(bits_per_symbol: u32) -> Result<Self> {
        if !(1..=8).contains(&bits_per_symbol) {
            return Err(Error::BitsPerSymbol(bits_per_symbol));
        }
        let m = 1usize << bits_per_symbol;
        let points = (0..m)
            .map(|k| exact_unit(2.0 * PI * k as f64 / m as f64, k, m))
            .collect();
        let labels = (0..m as u32).map(gray).collect();
        let name = match m {
            2 => "bpsk".to_string(),
            _ => format!("{m}psk"),
        };
        Self::build(name, SignalKind::Psk, points, labels, None)
    }

    /// Square M-QAM, M = 2^λ with λ even, scaled to unit average energy,
    /// with per-axis Gray labeling (real-axis bits in the high half).
    pub fn square_qam(bits_per_symbol: u32) -> Result<Self> {
        if !matches!(bits_per_symbol, 2 | 4 | 6 | 8) {
            return Err(Error::BitsPerSymbol(bits_per_symbol));
        }
        let half = bits_per_symbol / 2;
        let side = 1usize << half;
        let m = side * side;
        let energy = 2.0 * (m as f64 - 1.0) / 3.0;
        let grid = QamGrid {
            side,
            scale: 1.0 / energy.sqrt(),
        };
        let mut points = Vec::with_capacity(m);
        let mut labels = Vec::with_capacity(m);
        for i_re in 0..side {
            for i_im in 0..side {
                points.push(Complex64::new(grid.level(i_re), grid.level(i_im)));
                labels.push((gray(i_re as u32) << half) | gray(i_im as u32));
            }
        }
        Self::build(
            format!("{m}qam"),
            SignalKind::SquareQam,
            points,
            labels,
            Some(grid),
        )
    }

    /// The same set rotated by `theta` radians. The result is a custom set
    /// with the original labeling.
    pub fn rotated(&self, theta: f64) -> Result<Self> {
        let rot = Complex64::from_polar(1.0, theta);
        Self::build(
            format!("{}:rot={theta}", self.name),
            SignalKind::Custom,
            self.points.iter().map(|p| p * rot).collect(),
            self.labels.clone(),
            None,
        )
    }

    /// Parses descriptors such as `bpsk`, `4psk`, `qpsk`, `8psk`, `16qam`,
    /// optionally followed by `:rot=<radians>`. Case and dashes are ignored.
    pub fn from_descriptor(desc: &str) -> Result<Self> {
        let norm: String = desc
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect();
        let (base, rot) = match norm.split_once(':') {
            Some((b, r)) => {
                let theta = r
                    .strip_prefix("rot=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownSignalSet(desc.to_string()))?;
                (b.to_string(), Some(theta))
            }
            None => (norm, None),
        };
        let set = match base.as_str() {
            "bpsk" | "2psk" => Self::psk(1)?,
            "qpsk" => Self::psk(2)?,
            _ => {
                let parse_m = |suffix: &str| -> Option<u32> {
                    let m: u32 = base.strip_suffix(suffix)?.parse().ok()?;
                    (m.is_power_of_two() && m >= 2).then(|| m.trailing_zeros())
                };
                if let Some(bits) = parse_m("psk") {
                    Self::psk(bits)?
                } else if let Some(bits) = parse_m("qam") {
                    Self::square_qam(bits)?
                } else {
                    return Err(Error::UnknownSignalSet(desc.to_string()));
                }
            }
        };
        match rot {
            Some(theta) => set.rotated(theta),
            None => Ok(set),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    /// Bit label of the point at `index`.
    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    /// Index of the point carrying `label` (the map μ).
    pub fn index_of_label(&self, label: u32) -> usize {
        self.by_label[label as usize]
    }

    pub fn symbol_for_bits(&self, label: u32) -> Complex64 {
        self.points[self.index_of_label(label)]
    }

    pub fn qam_grid(&self) -> Option<QamGrid> {
        self.qam
    }

    /// Index of the QAM point at grid position (`i_re`, `i_im`).
    pub fn qam_index(&self, i_re: usize, i_im: usize) -> Option<usize> {
        self.qam.map(|g| i_re * g.side + i_im)
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// Minimum Euclidean distance between distinct points.
    pub fn min_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.len() {
            for j in 0..i {
                d = d.min((self.points[i] - self.points[j]).norm());
            }
        }
        d
    }

    /// Minimum over distinct point pairs of |Δx^R|·|Δx^I|.
    pub fn coordinate_product_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.len() {
            for j in 0..i {
                let diff = self.points[i] - self.points[j];
                d = d.min(diff.re.abs() * diff.im.abs());
            }
        }
        d
    }

    /// Index of the point nearest to `y` (ties go to the lower index).
    pub fn nearest(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

impl fmt::Display for SignalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// e^{jθ} with exact values on the axes so that {1, j, -1, -j} and its
/// relatives come out without rounding noise.
fn exact_unit(theta: f64, k: usize, m: usize) -> Complex64 {
    if (4 * k) % m == 0 {
        match (4 * k) / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, theta)
    }
}

/// The difference constellation ΔS = {s - s' : s, s' ∈ S}.
#[derive(Debug, Clone)]
pub struct DifferenceSet {
    deltas: Vec<Complex64>,
    source: String,
}

impl DifferenceSet {
    /// All distinct differences, sorted by (real, imaginary) part.
    pub fn deltas(&self) -> &[Complex64] {
        &self.deltas
    }

    /// The differences other than zero.
    pub fn nonzero(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.deltas.iter().copied().filter(|d| d.norm() > POINT_TOL)
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Name of the signal set the differences were taken from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.deltas.iter().any(|d| (d - z).norm() <= POINT_TOL)
    }
}

/// Computes the deduplicated difference set of `s`.
pub fn difference_set(s: &SignalSet) -> DifferenceSet {
    let mut deltas: Vec<Complex64> = Vec::new();
    for a in s.points() {
        for b in s.points() {
            let d = a - b;
            // Snap rounding noise so that 0 and axis values are exact.
            let d = Complex64::new(snap(d.re), snap(d.im));
            if !deltas.iter().any(|e| (e - d).norm() <= POINT_TOL) {
                deltas.push(d);
            }
        }
    }
    deltas.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    DifferenceSet {
        deltas,
        source: s.name().to_string(),
    }
}

fn snap(v: f64) -> f64 {
    if v.abs() <= POINT_TOL {
        0.0
    } else {
        v
    }
}
