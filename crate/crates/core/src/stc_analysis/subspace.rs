//! Vector subspaces of C^n_t used as singular fade subspaces.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative threshold below which the first coordinate of a 1-D subspace of
/// C² is treated as zero when forming the canonical ratio.
const CANONICAL_TOL: f64 = 1e-9;

/// Second coordinate of the canonical spanning vector [1, γ] of a 1-D
/// subspace of C², or the point at infinity for ⟨[0, 1]⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalRatio {
    Finite(Complex64),
    Infinity,
}

impl CanonicalRatio {
    fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            CanonicalRatio::Infinity => (0, 0.0, 0.0),
            CanonicalRatio::Finite(g) if g.norm() == 0.0 => (1, 0.0, 0.0),
            CanonicalRatio::Finite(g) => (2, round9(g.norm()), round9(g.arg())),
        }
    }
}

impl fmt::Display for CanonicalRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalRatio::Infinity => write!(f, "inf"),
            CanonicalRatio::Finite(g) => write!(f, "{}", fmt_complex(*g)),
        }
    }
}

/// A subspace of C^n_t given by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct FadeSubspace {
    n_t: usize,
    basis: Vec<DVector<Complex64>>,
    canonical: Option<CanonicalRatio>,
}

impl FadeSubspace {
    /// The zero-dimensional subspace ⟨0⟩.
    pub fn trivial(n_t: usize) -> Self {
        Self {
            n_t,
            basis: Vec::new(),
            canonical: None,
        }
    }

    /// Span of the given vectors, orthonormalized by Gram-Schmidt. Vectors
    /// that are numerically dependent on earlier ones are dropped.
    pub fn span(n_t: usize, vectors: &[DVector<Complex64>]) -> Self {
        let mut basis: Vec<DVector<Complex64>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), n_t, "vector length must equal n_t");
            let scale = v.norm();
            if scale == 0.0 {
                continue;
            }
            let mut w = v.clone();
            // Two passes keep the basis orthonormal to working precision.
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dotc(&w);
                    w -= b * proj;
                }
            }
            let n = w.norm();
            if n > 1e-10 * scale {
                basis.push(w / Complex64::new(n, 0.0));
            }
        }
        Self::from_orthonormal(n_t, basis)
    }

    /// Wraps an already orthonormal basis.
    pub(crate) fn from_orthonormal(n_t: usize, basis: Vec<DVector<Complex64>>) -> Self {
        let canonical = if n_t == 2 && basis.len() == 1 {
            let v = &basis[0];
            if v[0].norm() > CANONICAL_TOL * v.norm() {
                Some(CanonicalRatio::Finite(snap(v[1] / v[0])))
            } else {
                Some(CanonicalRatio::Infinity)
            }
        } else {
            None
        };
        Self {
            n_t,
            basis,
            canonical,
        }
    }

    /// The 1-D subspace of C² spanned by [1, γ], or [0, 1] for infinity.
    pub fn from_ratio(ratio: CanonicalRatio) -> Self {
        let v = match ratio {
            CanonicalRatio::Finite(g) => DVector::from_vec(vec![Complex64::new(1.0, 0.0), g]),
            CanonicalRatio::Infinity => {
                DVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
            }
        };
        let mut s = Self::span(2, &[v]);
        s.canonical = Some(ratio);
        s
    }

    /// ⟨e_i⟩ for the listed coordinate indices.
    pub fn coordinate(n_t: usize, indices: &[usize]) -> Self {
        let vs: Vec<_> = indices
            .iter()
            .map(|&i| {
                let mut v = DVector::zeros(n_t);
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::span(n_t, &vs)
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[DVector<Complex64>] {
        &self.basis
    }

    pub fn canonical_ratio(&self) -> Option<CanonicalRatio> {
        self.canonical
    }

    /// Orthogonal projector B B^H onto the subspace.
    pub fn projection(&self) -> DMatrix<Complex64> {
        let mut p = DMatrix::zeros(self.n_t, self.n_t);
        for b in &self.basis {
            p += b * b.adjoint();
        }
        p
    }

    /// Frobenius distance between the two projectors.
    pub fn distance(&self, other: &FadeSubspace) -> f64 {
        (self.projection() - other.projection()).norm()
    }

    /// Sine of the principal angle between `h` and the subspace, i.e.
    /// ‖(I - P)h‖ / ‖h‖. Equals 1 for the trivial subspace.
    pub fn sine_to(&self, h: &DVector<Complex64>) -> f64 {
        let n = h.norm();
        let mut r = h.clone();
        for b in &self.basis {
            let proj = b.dotc(h);
            r -= b * proj;
        }
        r.norm() / n
    }

    /// Deterministic ordering used for reports.
    pub(crate) fn order(&self, other: &Self) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            match (self.canonical, other.canonical) {
                (Some(a), Some(b)) => {
                    let (ka, kb) = (a.sort_key(), b.sort_key());
                    ka.0.cmp(&kb.0)
                        .then(ka.1.total_cmp(&kb.1))
                        .then(ka.2.total_cmp(&kb.2))
                }
                _ => {
                    let (pa, pb) = (self.projection(), other.projection());
                    for (x, y) in pa.iter().zip(pb.iter()) {
                        let o = round9(x.re)
                            .total_cmp(&round9(y.re))
                            .then(round9(x.im).total_cmp(&round9(y.im)));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                    Ordering::Equal
                }
            }
        })
    }
}

impl fmt::Display for FadeSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "<0>");
        }
        if let Some(r) = self.canonical {
            return match r {
                CanonicalRatio::Infinity => write!(f, "<[0, 1]>"),
                CanonicalRatio::Finite(g) => write!(f, "<[1, {}]>", fmt_complex(g)),
            };
        }
        write!(f, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (k, z) in b.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", fmt_complex(snap(*z)))?;
            }
            write!(f, "]")?;
        }
        write!(f, ">")
    }
}

/// Removes subspaces whose projectors lie within `tol` (Frobenius) of an
/// earlier one. The first occurrence is kept.
pub fn dedup_subspaces(list: &[FadeSubspace], tol: f64) -> Vec<FadeSubspace> {
    let mut out: Vec<(FadeSubspace, DMatrix<Complex64>)> = Vec::new();
    for s in list {
        let p = s.projection();
        let dup = out
            .iter()
            .any(|(o, q)| o.dim() == s.dim() && (q - &p).norm() < tol);
        if !dup {
            out.push((s.clone(), p));
        }
    }
    out.into_iter().map(|(s, _)| s).collect()
}

/// Result of computing {h : hᵀ C = 0} for a matrix C.
pub(crate) struct LeftNull {
    pub rank: usize,
    pub basis: Vec<DVector<Complex64>>,
}

/// Rank of `c` (n_t × T) and an orthonormal basis of {h ∈ C^n_t : hᵀ C = 0}.
///
/// Singular values at or below `rel_tol` times the largest one count as zero.
pub(crate) fn left_null_space(c: &DMatrix<Complex64>, rel_tol: f64) -> LeftNull {
    let n_t = c.nrows();
    let t = c.ncols();
    // Pad Cᵀ to at least n_t rows so that the thin SVD returns a full V.
    let rows = t.max(n_t);
    let mut a = DMatrix::<Complex64>::zeros(rows, n_t);
    for i in 0..n_t {
        for j in 0..t {
            a[(j, i)] = c[(i, j)];
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("V requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let thr = rel_tol * smax;
    let mut rank = 0;
    let mut basis = Vec::new();
    for i in 0..sv.len() {
        if smax > 0.0 && sv[i] > thr {
            rank += 1;
        } else {
            basis.push(v_t.row(i).adjoint().into_owned());
        }
    }
    LeftNull { rank, basis }
}

fn round9(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

fn snap(z: Complex64) -> Complex64 {
    let s = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    Complex64::new(s(z.re), s(z.im))
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    let r = |v: f64| {
        let x = (v * 1e6).round() / 1e6;
        if x == 0.0 {
            0.0
        } else {
            x
        }
    };
    let (re, im) = (r(z.re), r(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}j")
    } else if im < 0.0 {
        format!("{re}-{}j", -im)
    } else {
        format!("{re}+{im}j")
    }
}
