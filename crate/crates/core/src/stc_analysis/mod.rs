//! Rank spectra and singular fade subspaces of linear space-time designs.
//!
//! A channel row vector h is a deep fade for the codeword difference C(Δx)
//! when hᵀ C(Δx) = 0. The set of such h is the singular fade subspace
//! associated with Δx; its dimension is n_t - rank C(Δx). Enumerating Δx over
//! ΔS^K yields every singular fade subspace of a design over a signal set.

mod design;
pub mod report;
mod subspace;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::constellation::{difference_set, SignalSet, POINT_TOL};
use crate::error::{Error, Result};

pub use design::{gciod, gcod, named_design, LinearDesign, DESIGN_NAMES};
pub(crate) use subspace::{fmt_complex, left_null_space};
pub use subspace::{dedup_subspaces, CanonicalRatio, FadeSubspace};

/// Numerical knobs for the enumeration.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    /// Singular values at or below this fraction of the largest one are zero.
    pub rank_rel_tol: f64,
    /// Projector Frobenius distance under which two subspaces are equal.
    pub dedup_tol: f64,
    /// Maximum number of difference vectors to enumerate.
    pub budget: u128,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-9,
            dedup_tol: 1e-6,
            budget: 10_000_000,
        }
    }
}

/// A difference vector that produced a given subspace.
#[derive(Debug, Clone)]
pub struct Witness {
    pub delta: Vec<Complex64>,
    pub rank: usize,
}

/// Rank histogram of C(Δx) over all nonzero Δx ∈ ΔS^K plus the distinct
/// non-trivial singular fade subspaces.
#[derive(Debug, Clone)]
pub struct RankSpectrum {
    pub design: String,
    pub signal_set: String,
    pub n_t: usize,
    /// Number of nonzero difference vectors achieving each rank.
    pub counts: BTreeMap<usize, u64>,
    pub min_rank: usize,
    /// Number of nonzero difference vectors enumerated.
    pub total: u64,
    /// Distinct non-trivial subspaces; empty when only ⟨0⟩ occurs.
    pub subspaces: Vec<FadeSubspace>,
    /// `witnesses[i]` produced `subspaces[i]`.
    pub witnesses: Vec<Witness>,
}

impl RankSpectrum {
    /// True when the trivial subspace is the only singular fade subspace.
    pub fn trivial_only(&self) -> bool {
        self.subspaces.is_empty()
    }
}

/// Enumerates every nonzero Δx ∈ ΔS^K and collects the rank spectrum of the
/// codeword difference matrices together with their singular fade subspaces.
pub fn rank_spectrum(
    design: &LinearDesign,
    s: &SignalSet,
    opts: &AnalysisOptions,
) -> Result<RankSpectrum> {
    let ds = difference_set(s);
    let deltas = ds.deltas();
    let nd = deltas.len();
    let k = design.k();
    let needed = (nd as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > opts.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let n_t = design.n_t();
    // contrib[i][d] = W_i^R Re(Δ_d) + W_i^I Im(Δ_d)
    let contrib: Vec<Vec<DMatrix<Complex64>>> = (0..k)
        .map(|i| {
            let (wr, wi) = (&design.weights()[2 * i], &design.weights()[2 * i + 1]);
            deltas
                .iter()
                .map(|d| wr * Complex64::new(d.re, 0.0) + wi * Complex64::new(d.im, 0.0))
                .collect()
        })
        .collect();

    let mut counts = BTreeMap::new();
    let mut found: Vec<(FadeSubspace, DMatrix<Complex64>, Witness)> = Vec::new();
    let mut total = 0u64;
    let mut idx = vec![0usize; k];
    loop {
        let nonzero = idx.iter().any(|&i| deltas[i].norm() > POINT_TOL);
        if nonzero {
            total += 1;
            let mut c = DMatrix::<Complex64>::zeros(n_t, design.t());
            for (i, &di) in idx.iter().enumerate() {
                c += &contrib[i][di];
            }
            let ln = left_null_space(&c, opts.rank_rel_tol);
            *counts.entry(ln.rank).or_insert(0u64) += 1;
            if ln.rank < n_t {
                let sub = FadeSubspace::from_orthonormal(n_t, ln.basis);
                let p = sub.projection();
                let dup = found
                    .iter()
                    .any(|(f, q, _)| f.dim() == sub.dim() && (q - &p).norm() < opts.dedup_tol);
                if !dup {
                    let w = Witness {
                        delta: idx.iter().map(|&i| deltas[i]).collect(),
                        rank: ln.rank,
                    };
                    found.push((sub, p, w));
                }
            }
        }
        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == k {
                let mut found = found;
                found.sort_by(|a, b| a.0.order(&b.0));
                let min_rank = counts.keys().next().copied().unwrap_or(n_t);
                let (subspaces, witnesses) = found.into_iter().map(|(s, _, w)| (s, w)).unzip();
                return Ok(RankSpectrum {
                    design: design.name().to_string(),
                    signal_set: s.name().to_string(),
                    n_t,
                    counts,
                    min_rank,
                    total,
                    subspaces,
                    witnesses,
                });
            }
            idx[pos] += 1;
            if idx[pos] < nd {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Singular fade subspaces ⟨[Δx_A, Δx_B]⟩^⊥ of 2-antenna spatial
/// multiplexing, computed in closed form as ⟨[1, -Δx_A/Δx_B]⟩ (or ⟨[0, 1]⟩
/// when Δx_B = 0). Sorted: ⟨[0,1]⟩, ⟨[1,0]⟩, then by |γ| and arg γ.
pub fn enumerate_spatial_mux_subspaces(s: &SignalSet, n_t: usize) -> Result<Vec<FadeSubspace>> {
    if n_t != 2 {
        return Err(Error::Unsupported(format!(
            "spatial multiplexing analysis is implemented for n_t = 2, got {n_t}"
        )));
    }
    let ds = difference_set(s);
    let mut all = Vec::new();
    for &a in ds.deltas() {
        for &b in ds.deltas() {
            if a.norm() <= POINT_TOL && b.norm() <= POINT_TOL {
                continue;
            }
            let ratio = if b.norm() <= POINT_TOL {
                CanonicalRatio::Infinity
            } else {
                let g = -a / b;
                let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
                CanonicalRatio::Finite(Complex64::new(snap(g.re), snap(g.im)))
            };
            all.push(FadeSubspace::from_ratio(ratio));
        }
    }
    let mut out = dedup_subspaces(&all, AnalysisOptions::default().dedup_tol);
    out.sort_by(|a, b| a.order(b));
    Ok(out)
}

/// Outcome of [`is_deep_fade`].
#[derive(Debug, Clone, Copy)]
pub struct DeepFadeCheck {
    pub deep: bool,
    /// Smallest sine of the principal angle between h and a listed subspace.
    pub distance: f64,
    /// Index of the nearest subspace, if the list is non-empty.
    pub nearest: Option<usize>,
}

/// Whether the channel vector `h` lies within `tol` (sine of the principal
/// angle) of any of `subspaces`.
pub fn is_deep_fade(
    h: &[Complex64],
    subspaces: &[FadeSubspace],
    tol: f64,
) -> Result<DeepFadeCheck> {
    let hv = DVector::from_column_slice(h);
    if hv.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut best = (f64::INFINITY, None);
    for (i, s) in subspaces.iter().enumerate() {
        if s.n_t() != h.len() {
            return Err(Error::Unsupported(format!(
                "channel length {} does not match subspace dimension {}",
                h.len(),
                s.n_t()
            )));
        }
        let d = s.sine_to(&hv);
        if d < best.0 {
            best = (d, Some(i));
        }
    }
    Ok(DeepFadeCheck {
        deep: best.0 <= tol,
        distance: best.0,
        nearest: best.1,
    })
}
