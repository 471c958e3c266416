//! Joint ML decoding of the four DSTC symbols at the relay.
//!
//! Stacking real and imaginary parts, the two MA slots read
//! ỹ = H_eq x̃ + z̃ with x̃ = [x_A1, x_A2, x_B1, x_B2] split into real pairs.
//! After H_eq = Q [R_1 | R_2] the metric becomes ‖Qᵀỹ − R_1 x̃_A − R_2 x̃_B‖².
//! For unitary generators R_1 is diagonal, so once (x_B1, x_B2) is fixed the
//! two A symbols decouple and each is found by a scan over S, or by rounding
//! for square QAM.

use nalgebra::{Matrix4, SMatrix, Vector4};
use num_complex::Complex64;

use crate::constellation::{SignalKind, SignalSet};
use crate::dstc::DstcDesign;
use crate::error::{Error, Result};

pub type Heq = SMatrix<f64, 4, 8>;

/// Off-diagonal tolerance of R_1, relative to ‖R‖_F, for the decoupled decoders.
pub const R1_DIAG_REL_TOL: f64 = 1e-7;

/// The real 4x8 channel seen by the relay and its QR factors.
#[derive(Debug, Clone)]
pub struct EquivalentChannel {
    h_eq: Heq,
    q: Matrix4<f64>,
    r: Heq,
    zero: bool,
}

/// Stacks a complex slot pair as [Re y1, Im y1, Re y2, Im y2].
pub fn realify(y: [Complex64; 2]) -> Vector4<f64> {
    Vector4::new(y[0].re, y[0].im, y[1].re, y[1].im)
}

fn stack_symbols(x: &[Complex64; 4]) -> SMatrix<f64, 8, 1> {
    SMatrix::<f64, 8, 1>::from_iterator(x.iter().flat_map(|z| [z.re, z.im]))
}

/// Builds H_eq for the channel (h_a, h_b). Any transmit amplitude must
/// already be folded into the fades.
pub fn build_h_eq(d: &DstcDesign, h_a: Complex64, h_b: Complex64) -> EquivalentChannel {
    let zero_c = Complex64::new(0.0, 0.0);
    let mut h_eq = Heq::zeros();
    for k in 0..8 {
        let unit = if k % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        let mut x = [zero_c; 4];
        x[k / 2] = unit;
        let ra = d.row_a([x[0], x[1]]);
        let rb = d.row_b([x[2], x[3]]);
        let s = [h_a * ra[0] + h_b * rb[0], h_a * ra[1] + h_b * rb[1]];
        h_eq.set_column(k, &realify(s));
    }
    let zero = h_a.norm() == 0.0 && h_b.norm() == 0.0;
    let (q, r) = if zero {
        (Matrix4::identity(), Heq::zeros())
    } else {
        let qr = h_eq.qr();
        let mut q: Matrix4<f64> = qr.q();
        let mut r: Heq = qr.r();
        for i in 0..4 {
            if r[(i, i)] < 0.0 {
                r.row_mut(i).neg_mut();
                q.column_mut(i).neg_mut();
            }
        }
        (q, r)
    };
    EquivalentChannel { h_eq, q, r, zero }
}

impl EquivalentChannel {
    pub fn h_eq(&self) -> &Heq {
        &self.h_eq
    }

    pub fn q(&self) -> &Matrix4<f64> {
        &self.q
    }

    pub fn r(&self) -> &Heq {
        &self.r
    }

    /// Left 4x4 block of R (acts on x̃_A).
    pub fn r1(&self) -> Matrix4<f64> {
        self.r.fixed_view::<4, 4>(0, 0).into_owned()
    }

    /// Right 4x4 block of R (acts on x̃_B).
    pub fn r2(&self) -> Matrix4<f64> {
        self.r.fixed_view::<4, 4>(0, 4).into_owned()
    }

    /// True when both fades were zero.
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Largest off-diagonal magnitude of R_1.
    pub fn r1_max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m = m.max(self.r[(i, j)].abs());
                }
            }
        }
        m
    }

    /// Whether R_1 is diagonal within [`R1_DIAG_REL_TOL`]·‖R‖_F.
    pub fn r1_is_diagonal(&self) -> bool {
        self.r1_max_off_diagonal() <= R1_DIAG_REL_TOL * self.r.norm()
    }

    /// Noise-free received vector H_eq x̃.
    pub fn received(&self, x: &[Complex64; 4]) -> Vector4<f64> {
        self.h_eq * stack_symbols(x)
    }

    /// ‖ỹ − H_eq x̃‖².
    pub fn metric(&self, y: &Vector4<f64>, x: &[Complex64; 4]) -> f64 {
        (y - self.received(x)).norm_squared()
    }
}

/// A relay decision on (x_A1, x_A2, x_B1, x_B2).
#[derive(Debug, Clone, PartialEq)]
pub struct RelayDecision {
    /// Indices into the signal set.
    pub indices: [usize; 4],
    pub symbols: [Complex64; 4],
    /// ‖ỹ − H_eq x̃‖² at the decision.
    pub metric: f64,
    /// Number of symbol-metric evaluations performed.
    pub evaluations: u64,
    /// Set when the decoupled decoder fell back to exhaustive search.
    pub fallback: bool,
}

fn decision(s: &SignalSet, idx: [usize; 4], metric: f64, evaluations: u64) -> RelayDecision {
    RelayDecision {
        indices: idx,
        symbols: idx.map(|i| s.point(i)),
        metric,
        evaluations,
        fallback: false,
    }
}

/// Keeps the smaller metric, breaking exact ties by index order.
fn better(m: f64, idx: [usize; 4], best: f64, best_idx: [usize; 4]) -> bool {
    m < best || (m == best && idx < best_idx)
}

/// Exhaustive ML over S⁴ evaluated directly on the complex codewords
/// [h_a h_b]·C(x_A, x_B). Independent of the H_eq route.
pub fn ml_bruteforce(
    d: &DstcDesign,
    h_a: Complex64,
    h_b: Complex64,
    y: [Complex64; 2],
    s: &SignalSet,
) -> RelayDecision {
    let m = s.len();
    let pts = s.points();
    let contrib = |h: Complex64, row: [Complex64; 2]| [h * row[0], h * row[1]];
    let mut ca = Vec::with_capacity(m * m);
    let mut cb = Vec::with_capacity(m * m);
    for &p in pts {
        for &q in pts {
            ca.push(contrib(h_a, d.row_a([p, q])));
            cb.push(contrib(h_b, d.row_b([p, q])));
        }
    }
    let mut best = f64::INFINITY;
    let mut best_idx = [0; 4];
    for (ia, a) in ca.iter().enumerate() {
        let ra = [y[0] - a[0], y[1] - a[1]];
        for (ib, b) in cb.iter().enumerate() {
            let metric = (ra[0] - b[0]).norm_sqr() + (ra[1] - b[1]).norm_sqr();
            if metric < best {
                best = metric;
                best_idx = [ia / m, ia % m, ib / m, ib % m];
            }
        }
    }
    decision(s, best_idx, best, (m as u64).pow(4))
}

/// Exhaustive ML over S⁴ on the real model ỹ = H_eq x̃.
pub fn ml_bruteforce_heq(ec: &EquivalentChannel, y: [Complex64; 2], s: &SignalSet) -> RelayDecision {
    let yv = realify(y);
    let m = s.len();
    let pts = s.points();
    let mut best = f64::INFINITY;
    let mut best_idx = [0; 4];
    for i0 in 0..m {
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    let x = [pts[i0], pts[i1], pts[i2], pts[i3]];
                    let metric = ec.metric(&yv, &x);
                    if metric < best {
                        best = metric;
                        best_idx = [i0, i1, i2, i3];
                    }
                }
            }
        }
    }
    decision(s, best_idx, best, (m as u64).pow(4))
}

fn fallback(ec: &EquivalentChannel, y: [Complex64; 2], s: &SignalSet) -> RelayDecision {
    log::warn!(
        "R_1 is not diagonal (max off-diagonal {:.3e}); using exhaustive search",
        ec.r1_max_off_diagonal()
    );
    let mut d = ml_bruteforce_heq(ec, y, s);
    d.fallback = true;
    d
}

/// Shared driver: conditions on every (x_B1, x_B2) and lets `pick` choose
/// each A symbol from (w_re, w_im, r_re, r_im).
fn conditional_search<F>(ec: &EquivalentChannel, y: [Complex64; 2], s: &SignalSet, mut pick: F) -> RelayDecision
where
    F: FnMut(f64, f64, f64, f64) -> (usize, f64, u64),
{
    let yv = realify(y);
    let z = ec.q.transpose() * yv;
    let r2 = ec.r2();
    let diag = [ec.r[(0, 0)], ec.r[(1, 1)], ec.r[(2, 2)], ec.r[(3, 3)]];
    let m = s.len();
    let pts = s.points();
    let mut best = f64::INFINITY;
    let mut best_idx = [0; 4];
    let mut evals = 0u64;
    for b1 in 0..m {
        for b2 in 0..m {
            let xb = Vector4::new(pts[b1].re, pts[b1].im, pts[b2].re, pts[b2].im);
            let w = z - r2 * xb;
            let (a1, m1, e1) = pick(w[0], w[1], diag[0], diag[1]);
            let (a2, m2, e2) = pick(w[2], w[3], diag[2], diag[3]);
            evals += e1 + e2;
            let metric = m1 + m2;
            let idx = [a1, a2, b1, b2];
            if better(metric, idx, best, best_idx) {
                best = metric;
                best_idx = idx;
            }
        }
    }
    let symbols = best_idx.map(|i| pts[i]);
    // Report the exact metric of the chosen point.
    let exact = ec.metric(&yv, &symbols);
    decision(s, best_idx, exact, evals)
}

/// Conditional ML with 2M³ symbol-metric evaluations. Falls back to
/// exhaustive search (with a warning) when R_1 is not diagonal.
pub fn ml_conditional(ec: &EquivalentChannel, y: [Complex64; 2], s: &SignalSet) -> RelayDecision {
    if !ec.r1_is_diagonal() {
        return fallback(ec, y, s);
    }
    let pts = s.points();
    conditional_search(ec, y, s, |wr, wi, dr, di| {
        let mut best = f64::INFINITY;
        let mut arg = 0;
        for (i, p) in pts.iter().enumerate() {
            let e = (wr - dr * p.re).powi(2) + (wi - di * p.im).powi(2);
            if e < best {
                best = e;
                arg = i;
            }
        }
        (arg, best, pts.len() as u64)
    })
}

/// Conditional ML for square QAM: each coordinate of x_A1 and x_A2 is the
/// scaled received value rounded to the PAM grid, so one metric evaluation
/// per symbol and 2M² in total.
pub fn ml_conditional_qam(ec: &EquivalentChannel, y: [Complex64; 2], s: &SignalSet) -> Result<RelayDecision> {
    let grid = match (s.kind(), s.qam_grid()) {
        (SignalKind::SquareQam, Some(g)) => g,
        _ => {
            return Err(Error::DecoderIncompatible {
                decoder: "qam_fast".into(),
                reason: format!("signal set {} is not square QAM", s.name()),
            })
        }
    };
    if !ec.r1_is_diagonal() {
        return Ok(fallback(ec, y, s));
    }
    let coord = |w: f64, r: f64| -> (usize, f64) {
        let i = if r > 0.0 { grid.nearest_level(w / r) } else { grid.nearest_level(0.0) };
        (i, (w - r * grid.level(i)).powi(2))
    };
    Ok(conditional_search(ec, y, s, |wr, wi, dr, di| {
        let (ir, er) = coord(wr, dr);
        let (ii, ei) = coord(wi, di);
        let idx = s.qam_index(ir, ii).expect("square QAM");
        (idx, er + ei, 1)
    }))
}

/// Decoder selection for the DSTC protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecoderKind {
    /// Exhaustive search over S⁴.
    Brute,
    /// Conditional ML, M³.
    #[default]
    Conditional,
    /// Conditional ML with per-coordinate rounding, square QAM only.
    QamFast,
}

impl DecoderKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "brute" | "bruteforce" | "ml" => Ok(Self::Brute),
            "conditional" | "cond" => Ok(Self::Conditional),
            "qam_fast" | "qam" | "fast" => Ok(Self::QamFast),
            other => Err(Error::Config(format!("unknown decoder '{other}'"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Brute => "brute",
            Self::Conditional => "conditional",
            Self::QamFast => "qam_fast",
        }
    }

    /// Checks that the decoder can run on this design and signal set.
    pub fn check(&self, d: &DstcDesign, s: &SignalSet) -> Result<()> {
        match self {
            Self::Brute => Ok(()),
            Self::Conditional | Self::QamFast => {
                if *self == Self::QamFast && s.kind() != SignalKind::SquareQam {
                    return Err(Error::DecoderIncompatible {
                        decoder: self.as_str().into(),
                        reason: format!("signal set {} is not square QAM", s.name()),
                    });
                }
                if !d.is_unitary(1e-9) {
                    return Err(Error::DecoderIncompatible {
                        decoder: self.as_str().into(),
                        reason: format!("design {} does not have unitary generators", d.name()),
                    });
                }
                Ok(())
            }
        }
    }

    /// Decodes one MA frame; `h_a`, `h_b` include the transmit amplitude.
    pub fn decode(
        &self,
        d: &DstcDesign,
        h_a: Complex64,
        h_b: Complex64,
        y: [Complex64; 2],
        s: &SignalSet,
    ) -> Result<RelayDecision> {
        match self {
            Self::Brute => Ok(ml_bruteforce(d, h_a, h_b, y, s)),
            Self::Conditional => Ok(ml_conditional(&build_h_eq(d, h_a, h_b), y, s)),
            Self::QamFast => ml_conditional_qam(&build_h_eq(d, h_a, h_b), y, s),
        }
    }
}
