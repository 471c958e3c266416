//! Linear space-time designs and the catalogue of classical examples.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

type Mat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A linear space-time design: codeword(x) = Σ_k W_k^R x_k^R + W_k^I x_k^I.
///
/// Weight matrices are stored in the order x_1^R, x_1^I, ..., x_K^R, x_K^I.
#[derive(Debug, Clone)]
pub struct LinearDesign {
    name: String,
    n_t: usize,
    t: usize,
    k: usize,
    weights: Vec<Mat>,
}

impl LinearDesign {
    /// Builds a design from explicit weight matrices.
    pub fn new(name: &str, n_t: usize, t: usize, weights: Vec<Mat>) -> Result<Self> {
        if weights.is_empty() || weights.len() % 2 != 0 {
            return Err(Error::InvalidDesign(
                "need an even, nonzero number of weight matrices".into(),
            ));
        }
        if weights.iter().any(|w| w.nrows() != n_t || w.ncols() != t) {
            return Err(Error::InvalidDesign(format!(
                "all weight matrices must be {n_t}x{t}"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            n_t,
            t,
            k: weights.len() / 2,
            weights,
        })
    }

    /// Extracts the weight matrices of a real-linear codeword map by
    /// evaluating it on the unit real and imaginary coordinates.
    pub fn from_fn<F>(name: &str, n_t: usize, t: usize, k: usize, f: F) -> Self
    where
        F: Fn(&[Complex64]) -> Mat,
    {
        let mut weights = Vec::with_capacity(2 * k);
        for i in 0..k {
            for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut x = vec![ZERO; k];
                x[i] = unit;
                let w = f(&x);
                assert_eq!((w.nrows(), w.ncols()), (n_t, t));
                weights.push(w);
            }
        }
        Self {
            name: name.to_string(),
            n_t,
            t,
            k,
            weights,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of rows (transmit antennas).
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of columns (time slots).
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of complex symbols.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[Mat] {
        &self.weights
    }

    /// Codeword for the complex symbol vector `x` (length K).
    pub fn codeword(&self, x: &[Complex64]) -> Mat {
        assert_eq!(x.len(), self.k);
        let mut c = Mat::zeros(self.n_t, self.t);
        for (i, xi) in x.iter().enumerate() {
            c += &self.weights[2 * i] * Complex64::new(xi.re, 0.0);
            c += &self.weights[2 * i + 1] * Complex64::new(xi.im, 0.0);
        }
        c
    }
}

/// Names accepted by [`named_design`].
pub const DESIGN_NAMES: &[(&str, &str)] = &[
    ("spatial_mux2", "2x1 spatial multiplexing of two symbols"),
    ("alamouti", "2x2 Alamouti code (= gcod2)"),
    ("gcod4", "4x4 generalized complex orthogonal design G_4(x1,x2,x3)"),
    ("qod4", "4x4 quasi-orthogonal design"),
    ("ciod2", "2x2 coordinate interleaved orthogonal design (= gciod1)"),
    ("ciod4", "4x4 coordinate interleaved orthogonal design (= gciod2)"),
];

/// Looks up a classical design by name.
pub fn named_design(name: &str) -> Result<LinearDesign> {
    let key = name.trim().to_ascii_lowercase().replace('-', "_");
    let d = match key.as_str() {
        "spatial_mux2" | "spatial_mux" | "sm2" => {
            LinearDesign::from_fn("spatial_mux2", 2, 1, 2, |x| {
                DMatrix::from_column_slice(2, 1, &[x[0], x[1]])
            })
        }
        "alamouti" | "gcod2" => LinearDesign::from_fn("alamouti", 2, 2, 2, gcod),
        "gcod4" => LinearDesign::from_fn("gcod4", 4, 4, 3, gcod),
        "qod4" => LinearDesign::from_fn("qod4", 4, 4, 4, qod4),
        "ciod2" | "gciod1" => LinearDesign::from_fn("ciod2", 2, 2, 2, |x| gciod(x, 1)),
        "ciod4" | "gciod2" => LinearDesign::from_fn("ciod4", 4, 4, 4, |x| gciod(x, 2)),
        _ => return Err(Error::UnknownDesign(name.to_string())),
    };
    Ok(d)
}

/// Iterative GCOD: G_1(x1) = [x1] and
/// G_{2^a}(x_1..x_{a+1}) = [[G, x_{a+1} I], [-x_{a+1}^* I, G^H]] with G = G_{2^{a-1}}(x_1..x_a).
pub fn gcod(x: &[Complex64]) -> Mat {
    match x.len() {
        0 => panic!("gcod needs at least one symbol"),
        1 => DMatrix::from_element(1, 1, x[0]),
        n => {
            let g = gcod(&x[..n - 1]);
            let s = g.nrows();
            let xa = x[n - 1];
            let mut out = Mat::zeros(2 * s, 2 * s);
            out.view_mut((0, 0), (s, s)).copy_from(&g);
            out.view_mut((s, s), (s, s)).copy_from(&g.adjoint());
            for i in 0..s {
                out[(i, s + i)] = xa;
                out[(s + i, i)] = -xa.conj();
            }
            out
        }
    }
}

/// 4x4 quasi-orthogonal design.
fn qod4(x: &[Complex64]) -> Mat {
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    let c = |z: Complex64| z.conj();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            x1, -c(x2), -c(x3), x4, //
            x2, c(x1), -c(x4), -x3, //
            x3, -c(x4), c(x1), -x2, //
            x4, c(x3), c(x2), x1,
        ],
    )
}

/// 2^a x 2^a GCIOD: blockdiag(G(x̃_1..x̃_a), G(x̃_{a+1}..x̃_{2a})) with
/// x̃_i = x_i^R + j x_{(i+a) mod 2a}^I (1-based indices).
pub fn gciod(x: &[Complex64], a: usize) -> Mat {
    assert_eq!(x.len(), 2 * a);
    let tilde: Vec<Complex64> = (0..2 * a)
        .map(|i| Complex64::new(x[i].re, x[(i + a) % (2 * a)].im))
        .collect();
    let g1 = gcod(&tilde[..a]);
    let g2 = gcod(&tilde[a..]);
    let s = g1.nrows();
    let mut out = Mat::zeros(2 * s, 2 * s);
    out.view_mut((0, 0), (s, s)).copy_from(&g1);
    out.view_mut((s, s), (s, s)).copy_from(&g2);
    out
}
