//! Distributed space-time codes for the two MA phases.
//!
//! Node A sends x_A M_A and node B sends x_B M_B over two slots, so the relay
//! sees the 2x2 codeword whose first row depends only on A's symbols and the
//! second only on B's. A design is singularity minimal over S when every
//! difference matrix with both rows nonzero has full rank; what remains are
//! the two channel-intrinsic subspaces ⟨[1,0]⟩ and ⟨[0,1]⟩.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::constellation::{difference_set, SignalSet, POINT_TOL};
use crate::error::{Error, Result};
use crate::stc_analysis::LinearDesign;

pub type Mat2 = Matrix2<Complex64>;

/// Slack allowed on the per-node energy constraint trace(M M^H) ≤ 2.
pub const TRACE_SLACK: f64 = 1e-9;

/// Relative determinant threshold for the full-rank test.
pub const DET_REL_TOL: f64 = 1e-9;

const J: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A linear DSTC given by its two generator matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct DstcDesign {
    name: String,
    m_a: Mat2,
    m_b: Mat2,
}

/// Catalogue entries accepted by [`DstcDesign::from_name`].
pub const DSTC_CATALOGUE: &[(&str, &str)] = &[
    ("identity", "M_A = M_B = I (uncoded, not singularity minimal)"),
    ("construction1", "golden-number unitary generators, singularity minimal over Z[j]"),
    (
        "construction2[:theta=<rad>]",
        "M_A = I, M_B rotation by atan(sqrt 5) with phase theta (default pi/4)",
    ),
    (
        "transcendental[:a,b,c,d]",
        "rows scaled by (x1 + e^j x2); default a=d=1, b=c=0",
    ),
];

impl DstcDesign {
    /// Wraps a pair of generator matrices after checking the energy constraint.
    pub fn new(name: &str, m_a: Mat2, m_b: Mat2) -> Result<Self> {
        for (node, m) in [("A", &m_a), ("B", &m_b)] {
            let tr = trace_mmh(m);
            if !tr.is_finite() || tr > 2.0 + TRACE_SLACK {
                return Err(Error::InvalidDesign(format!(
                    "trace(M_{node} M_{node}^H) = {tr} exceeds 2"
                )));
            }
        }
        Ok(Self {
            name: name.to_string(),
            m_a,
            m_b,
        })
    }

    /// M_A = M_B = I.
    pub fn identity() -> Self {
        Self::new("identity", Mat2::identity(), Mat2::identity()).expect("unit trace")
    }

    /// Golden-number construction:
    /// M_A = (1/√5)[[α, ᾱ], [αφ, ᾱφ̄]], M_B = (1/√5)[[jα, ᾱ], [jαφ, ᾱφ̄]]
    /// with φ = (1+√5)/2, φ̄ = (1-√5)/2, α = 1+j-jφ, ᾱ = 1+j-jφ̄.
    pub fn construction_1() -> Self {
        let s5 = 5f64.sqrt();
        let phi = (1.0 + s5) / 2.0;
        let phib = (1.0 - s5) / 2.0;
        let alpha = c(1.0, 1.0 - phi);
        let alphab = c(1.0, 1.0 - phib);
        let k = c(1.0 / s5, 0.0);
        let m_a = Mat2::new(alpha, alphab, alpha * phi, alphab * phib) * k;
        let m_b = Mat2::new(J * alpha, alphab, J * alpha * phi, alphab * phib) * k;
        Self::new("construction1", m_a, m_b).expect("unitary")
    }

    /// M_A = I, M_B = [[cos φ_g, -sin φ_g e^{jθ}], [sin φ_g, cos φ_g e^{jθ}]]
    /// with φ_g = atan √5.
    pub fn construction_2(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 2.0 * PI) {
            return Err(Error::InvalidDesign(format!(
                "theta = {theta} must lie in (0, 2pi)"
            )));
        }
        let cg = 1.0 / 6f64.sqrt();
        let sg = 5f64.sqrt() / 6f64.sqrt();
        let e = Complex64::from_polar(1.0, theta);
        let m_b = Mat2::new(c(cg, 0.0), -e * sg, c(sg, 0.0), e * cg);
        let name = if theta == FRAC_PI_4 {
            "construction2".to_string()
        } else {
            format!("construction2:theta={theta}")
        };
        Self::new(&name, Mat2::identity(), m_b)
    }

    /// Codewords [[a u_A, b u_A], [c u_B, d u_B]] with u = x_1 + e^j x_2,
    /// each row scaled so that trace(M M^H) = 2.
    pub fn transcendental(
        a: Complex64,
        b: Complex64,
        cc: Complex64,
        d: Complex64,
    ) -> Result<Self> {
        let scale = a.norm().max(b.norm()).max(cc.norm()).max(d.norm());
        if scale == 0.0 || (a * d - b * cc).norm() <= 1e-12 * scale * scale {
            return Err(Error::InvalidDesign(
                "[[a, b], [c, d]] must be full rank".into(),
            ));
        }
        let ej = Complex64::from_polar(1.0, 1.0);
        let ka = c(1.0 / (a.norm_sqr() + b.norm_sqr()).sqrt(), 0.0);
        let kb = c(1.0 / (cc.norm_sqr() + d.norm_sqr()).sqrt(), 0.0);
        let m_a = Mat2::new(a, b, ej * a, ej * b) * ka;
        let m_b = Mat2::new(cc, d, ej * cc, ej * d) * kb;
        let f = crate::stc_analysis::fmt_complex;
        let name = format!("transcendental:{},{},{},{}", f(a), f(b), f(cc), f(d));
        Self::new(&name, m_a, m_b)
    }

    /// Resolves a catalogue name such as `construction1`,
    /// `construction2:theta=0.785`, `transcendental:1,1,-1,1` or `identity`.
    pub fn from_name(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (base, args) = match spec.split_once(':') {
            Some((b, a)) => (b.to_ascii_lowercase(), Some(a.trim())),
            None => (spec.to_ascii_lowercase(), None),
        };
        let bad = || Error::UnknownDesign(spec.to_string());
        match (base.as_str(), args) {
            ("identity", None) => Ok(Self::identity()),
            ("construction1" | "dstc1", None) => Ok(Self::construction_1()),
            ("construction2" | "dstc2", None) => Self::construction_2(FRAC_PI_4),
            ("construction2" | "dstc2", Some(a)) => {
                let v = a.strip_prefix("theta=").unwrap_or(a);
                let theta = parse_angle(v).ok_or_else(bad)?;
                Self::construction_2(theta)
            }
            ("transcendental", None) => {
                Self::transcendental(c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.))
            }
            ("transcendental", Some(a)) => {
                let v: Vec<Complex64> = a
                    .split(',')
                    .map(parse_complex)
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?;
                if v.len() != 4 {
                    return Err(bad());
                }
                Self::transcendental(v[0], v[1], v[2], v[3])
            }
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn m_a(&self) -> &Mat2 {
        &self.m_a
    }

    pub fn m_b(&self) -> &Mat2 {
        &self.m_b
    }

    /// x_A M_A for a row vector x_A.
    pub fn row_a(&self, x: [Complex64; 2]) -> [Complex64; 2] {
        row_times(x, &self.m_a)
    }

    /// x_B M_B for a row vector x_B.
    pub fn row_b(&self, x: [Complex64; 2]) -> [Complex64; 2] {
        row_times(x, &self.m_b)
    }

    /// The codeword [x_A M_A ; x_B M_B]. Also the difference matrix when
    /// called with symbol differences.
    pub fn codeword(&self, x_a: [Complex64; 2], x_b: [Complex64; 2]) -> Mat2 {
        let ra = self.row_a(x_a);
        let rb = self.row_b(x_b);
        Mat2::new(ra[0], ra[1], rb[0], rb[1])
    }

    /// The design as a 2x2 linear design in the symbols
    /// (x_A1, x_A2, x_B1, x_B2).
    pub fn to_linear_design(&self) -> LinearDesign {
        LinearDesign::from_fn(&self.name, 2, 2, 4, |x| {
            let cw = self.codeword([x[0], x[1]], [x[2], x[3]]);
            DMatrix::from_iterator(2, 2, cw.iter().copied())
        })
    }

    /// Whether both generators are unitary within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        [&self.m_a, &self.m_b]
            .iter()
            .all(|m| (*m * m.adjoint() - Mat2::identity()).norm() <= tol)
    }

    /// Average per-slot energy of each node's row, E‖x M‖²/2, averaged over
    /// all symbol pairs of `s`.
    pub fn average_slot_energy(&self, s: &SignalSet) -> (f64, f64) {
        let mut ea = 0.0;
        let mut eb = 0.0;
        for &p in s.points() {
            for &q in s.points() {
                ea += self.row_a([p, q]).iter().map(|z| z.norm_sqr()).sum::<f64>();
                eb += self.row_b([p, q]).iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        let n = (s.len() * s.len()) as f64 * 2.0;
        (ea / n, eb / n)
    }
}

fn row_times(x: [Complex64; 2], m: &Mat2) -> [Complex64; 2] {
    [
        x[0] * m[(0, 0)] + x[1] * m[(1, 0)],
        x[0] * m[(0, 1)] + x[1] * m[(1, 1)],
    ]
}

fn trace_mmh(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

fn parse_angle(v: &str) -> Option<f64> {
    let v = v.trim().to_ascii_lowercase();
    if let Some(den) = v.strip_prefix("pi/") {
        return den.parse::<f64>().ok().map(|d| PI / d);
    }
    v.parse().ok()
}

/// Parses `1`, `-0.5`, `2j`, `-j`, `1+2j`, `1-j`.
fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let imag = |t: &str| -> Option<f64> {
        let body = t.strip_suffix('j').or_else(|| t.strip_suffix('i'))?;
        match body {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => body.parse().ok(),
        }
    };
    if !s.ends_with('j') && !s.ends_with('i') {
        return s.parse().ok().map(|re| c(re, 0.0));
    }
    // Split at the last sign that is not the leading one or an exponent sign.
    let bytes = s.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re: f64 = s[..i].parse().ok()?;
            Some(c(re, imag(&s[i..])?))
        }
        None => Some(c(0.0, imag(&s)?)),
    }
}

/// Result of the brute-force singularity-minimality test.
#[derive(Debug, Clone)]
pub struct SingularityCheck {
    pub minimal: bool,
    /// A pair (Δx_A, Δx_B), both nonzero, with a singular difference matrix.
    pub witness: Option<([Complex64; 2], [Complex64; 2])>,
    /// Smallest |det C(Δx_A, Δx_B)| seen.
    pub min_abs_det: f64,
    pub pairs_checked: u64,
}

/// Default cap on the number of (Δx_A, Δx_B) pairs examined.
pub const SINGULARITY_BUDGET: u128 = 100_000_000;

fn nonzero_pairs(s: &SignalSet) -> Vec<[Complex64; 2]> {
    let ds = difference_set(s);
    let mut out = Vec::with_capacity(ds.len() * ds.len());
    for &a in ds.deltas() {
        for &b in ds.deltas() {
            if a.norm() > POINT_TOL || b.norm() > POINT_TOL {
                out.push([a, b]);
            }
        }
    }
    out
}

/// Checks det C(Δx_A, Δx_B) ≠ 0 for all nonzero Δx_A, Δx_B ∈ ΔS².
pub fn is_singularity_minimal(d: &DstcDesign, s: &SignalSet) -> Result<SingularityCheck> {
    is_singularity_minimal_with_budget(d, s, SINGULARITY_BUDGET)
}

pub fn is_singularity_minimal_with_budget(
    d: &DstcDesign,
    s: &SignalSet,
    budget: u128,
) -> Result<SingularityCheck> {
    let deltas = nonzero_pairs(s);
    let needed = (deltas.len() as u128).pow(2);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let rows_a: Vec<_> = deltas.iter().map(|&x| (x, d.row_a(x))).collect();
    let rows_b: Vec<_> = deltas.iter().map(|&x| (x, d.row_b(x))).collect();
    let mut min_abs_det = f64::INFINITY;
    let mut pairs = 0u64;
    for (xa, ra) in &rows_a {
        let na = ra[0].norm_sqr() + ra[1].norm_sqr();
        for (xb, rb) in &rows_b {
            pairs += 1;
            let det = (ra[0] * rb[1] - ra[1] * rb[0]).norm();
            min_abs_det = min_abs_det.min(det);
            let fro2 = na + rb[0].norm_sqr() + rb[1].norm_sqr();
            if det <= DET_REL_TOL * fro2.max(1.0) {
                return Ok(SingularityCheck {
                    minimal: false,
                    witness: Some((*xa, *xb)),
                    min_abs_det: det,
                    pairs_checked: pairs,
                });
            }
        }
    }
    Ok(SingularityCheck {
        minimal: true,
        witness: None,
        min_abs_det,
        pairs_checked: pairs,
    })
}

/// Minimum of ‖Δx_A M_A‖ and ‖Δx_B M_B‖ over nonzero differences: the only
/// nonzero singular value of the rank-one matrices C(Δx_A, 0) and C(0, Δx_B).
pub fn coding_gain(d: &DstcDesign, s: &SignalSet) -> f64 {
    let norm = |r: [Complex64; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    nonzero_pairs(s)
        .into_iter()
        .map(|x| norm(d.row_a(x)).min(norm(d.row_b(x))))
        .fold(f64::INFINITY, f64::min)
}

/// Coding gain together with the singularity-minimality flag it presumes.
#[derive(Debug, Clone, Copy)]
pub struct CodingGain {
    pub value: f64,
    pub singularity_minimal: bool,
}

pub fn coding_gain_checked(d: &DstcDesign, s: &SignalSet) -> Result<CodingGain> {
    let check = is_singularity_minimal(d, s)?;
    Ok(CodingGain {
        value: coding_gain(d, s),
        singularity_minimal: check.minimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stc_analysis::{rank_spectrum, AnalysisOptions, FadeSubspace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn qpsk() -> SignalSet {
        SignalSet::psk(2).unwrap()
    }

    fn qam16() -> SignalSet {
        SignalSet::square_qam(4).unwrap()
    }

    #[test]
    fn identity_codeword() {
        let d = DstcDesign::identity();
        let cw = d.codeword([c(1., 0.), c(0., 1.)], [c(-1., 0.), c(1., 0.)]);
        assert_eq!(cw, Mat2::new(c(1., 0.), c(0., 1.), c(-1., 0.), c(1., 0.)));
        let cw = d.codeword([c(0., 0.); 2], [c(1., 0.), c(1., 0.)]);
        assert_eq!(cw[(0, 0)], c(0., 0.));
        assert_eq!(cw[(0, 1)], c(0., 0.));
    }

    #[test]
    fn construction1_row_for_all_ones() {
        let d = DstcDesign::construction_1();
        let s5 = 5f64.sqrt();
        let phi = (1.0 + s5) / 2.0;
        let phib = (1.0 - s5) / 2.0;
        let alpha = c(1.0, 1.0 - phi);
        let alphab = c(1.0, 1.0 - phib);
        let row = d.row_a([c(1., 0.), c(1., 0.)]);
        // Direct product [1, 1] M_A = (1/√5)[α(1+φ), ᾱ(1+φ̄)].
        assert!((row[0] - alpha * (1.0 + phi) / s5).norm() < 1e-12);
        assert!((row[1] - alphab * (1.0 + phib) / s5).norm() < 1e-12);
        let zero = d.codeword([c(0., 0.); 2], [c(1., 0.), c(0., 1.)]);
        assert_eq!(zero[(0, 0)], c(0., 0.));
    }

    #[test]
    fn construction1_unitary() {
        let d = DstcDesign::construction_1();
        assert!((d.m_a() * d.m_a().adjoint() - Mat2::identity()).norm() < 1e-12);
        assert!((d.m_b() * d.m_b().adjoint() - Mat2::identity()).norm() < 1e-12);
        assert!((trace_mmh(d.m_a()) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn construction2_unitary_and_range() {
        let d = DstcDesign::construction_2(FRAC_PI_4).unwrap();
        assert!(d.is_unitary(1e-12));
        assert!(DstcDesign::construction_2(0.0).is_err());
        assert!(DstcDesign::construction_2(2.0 * PI).is_err());
    }

    #[test]
    fn energy_constraint_enforced() {
        let m = Mat2::identity() * c(1.1, 0.0);
        assert!(DstcDesign::new("x", m, Mat2::identity()).is_err());
    }

    #[test]
    fn identity_not_singularity_minimal() {
        let chk = is_singularity_minimal(&DstcDesign::identity(), &qpsk()).unwrap();
        assert!(!chk.minimal);
        let (xa, xb) = chk.witness.unwrap();
        assert!(xa.iter().any(|z| z.norm() > 0.0) && xb.iter().any(|z| z.norm() > 0.0));
        let cw = DstcDesign::identity().codeword(xa, xb);
        assert!(cw.determinant().norm() < 1e-12);
        // The stated example [2,0],[2,0] is also singular.
        let cw = DstcDesign::identity().codeword([c(2., 0.), c(0., 0.)], [c(2., 0.), c(0., 0.)]);
        assert_eq!(cw.determinant(), c(0., 0.));
    }

    #[test]
    fn constructions_singularity_minimal() {
        for s in [qpsk(), qam16()] {
            for d in [
                DstcDesign::construction_1(),
                DstcDesign::construction_2(FRAC_PI_4).unwrap(),
            ] {
                let chk = is_singularity_minimal(&d, &s).unwrap();
                assert!(chk.minimal, "{} over {}", d.name(), s.name());
            }
        }
    }

    #[test]
    fn transcendental_minimal_for_algebraic_sets() {
        let d = DstcDesign::transcendental(c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)).unwrap();
        for s in [qpsk(), SignalSet::psk(3).unwrap(), qam16()] {
            assert!(is_singularity_minimal(&d, &s).unwrap().minimal, "{}", s.name());
        }
        assert!(DstcDesign::transcendental(c(1., 0.), c(2., 0.), c(1., 0.), c(2., 0.)).is_err());
    }

    /// Independent oracle: min over nonzero (Δ1, Δ2) ∈ ΔS² of |Δ1 + e^j Δ2|.
    fn transcendental_gain_oracle(s: &SignalSet) -> f64 {
        let ds = difference_set(s);
        let ej = Complex64::from_polar(1.0, 1.0);
        let mut best = f64::INFINITY;
        for &a in ds.deltas() {
            for &b in ds.deltas() {
                if a.norm() == 0.0 && b.norm() == 0.0 {
                    continue;
                }
                best = best.min((a + ej * b).norm());
            }
        }
        best
    }

    #[test]
    fn transcendental_coding_gain() {
        let oracle = transcendental_gain_oracle(&qpsk());
        assert!((oracle - 0.687_682_221_157_3).abs() < 1e-12);
        let d1 = DstcDesign::from_name("transcendental:1,0,0,1").unwrap();
        let d2 = DstcDesign::from_name("transcendental:1,1,-1,1").unwrap();
        for d in [d1, d2] {
            let g = coding_gain(&d, &qpsk());
            assert!((g - oracle).abs() < 1e-12, "{}: {g}", d.name());
            assert!((g - 0.6877).abs() < 5e-4);
            assert!(g < 2f64.sqrt());
        }
    }

    #[test]
    fn unitary_constructions_reach_dmin() {
        for s in [qpsk(), SignalSet::psk(3).unwrap(), qam16()] {
            for d in [
                DstcDesign::construction_1(),
                DstcDesign::construction_2(FRAC_PI_4).unwrap(),
            ] {
                assert!((coding_gain(&d, &s) - s.min_distance()).abs() < 1e-9);
            }
        }
        let cg = coding_gain_checked(&DstcDesign::construction_1(), &qpsk()).unwrap();
        assert!(cg.singularity_minimal);
        assert!((cg.value - 2f64.sqrt()).abs() < 1e-9);
        let cg = coding_gain_checked(&DstcDesign::identity(), &qpsk()).unwrap();
        assert!(!cg.singularity_minimal);
    }

    fn random_trace2(rng: &mut ChaCha8Rng) -> Mat2 {
        let mut m = Mat2::from_fn(|_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let tr = trace_mmh(&m);
        m *= c((2.0 / tr).sqrt(), 0.0);
        m
    }

    #[test]
    fn coding_gain_bounded_by_dmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in [qpsk(), qam16()] {
            let dmin = s.min_distance();
            for _ in 0..200 {
                let d = DstcDesign::new("rand", random_trace2(&mut rng), random_trace2(&mut rng)).unwrap();
                assert!(coding_gain(&d, &s) <= dmin + 1e-9);
            }
        }
    }

    #[test]
    fn singularity_minimal_leaves_only_nonremovable() {
        let d = DstcDesign::construction_1();
        let sp = rank_spectrum(&d.to_linear_design(), &qpsk(), &AnalysisOptions::default()).unwrap();
        assert_eq!(sp.min_rank, 1);
        assert_eq!(sp.subspaces.len(), 2);
        for e in [FadeSubspace::coordinate(2, &[0]), FadeSubspace::coordinate(2, &[1])] {
            assert!(sp.subspaces.iter().any(|s| s.distance(&e) < 1e-9));
        }
        // and the witnesses have one of the two rows equal to zero
        for w in &sp.witnesses {
            let a_zero = w.delta[0].norm() == 0.0 && w.delta[1].norm() == 0.0;
            let b_zero = w.delta[2].norm() == 0.0 && w.delta[3].norm() == 0.0;
            assert!(a_zero || b_zero);
        }
    }

    #[test]
    fn linear_design_view_matches_codeword() {
        let d = DstcDesign::construction_2(FRAC_PI_4).unwrap();
        let ld = d.to_linear_design();
        let x = [c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1), c(0.0, 1.0)];
        let a = ld.codeword(&x);
        let b = d.codeword([x[0], x[1]], [x[2], x[3]]);
        for i in 0..2 {
            for j in 0..2 {
                assert!((a[(i, j)] - b[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn catalogue_names() {
        assert_eq!(DstcDesign::from_name("construction1").unwrap(), DstcDesign::construction_1());
        assert_eq!(DstcDesign::from_name("construction2").unwrap().name(), "construction2");
        let d = DstcDesign::from_name("construction2:theta=pi/8").unwrap();
        assert!((d.m_b()[(1, 1)].arg() - PI / 8.0).abs() < 1e-12);
        assert!(DstcDesign::from_name("transcendental:1,0,0").is_err());
        assert!(DstcDesign::from_name("bogus").is_err());
        let t = DstcDesign::from_name("transcendental:1+j,0,0,-2j").unwrap();
        assert!((trace_mmh(t.m_a()) - 2.0).abs() < 1e-12);
        assert!((trace_mmh(t.m_b()) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1"), Some(c(1., 0.)));
        assert_eq!(parse_complex("-j"), Some(c(0., -1.)));
        assert_eq!(parse_complex("2.5j"), Some(c(0., 2.5)));
        assert_eq!(parse_complex("1-j"), Some(c(1., -1.)));
        assert_eq!(parse_complex("-1+2j"), Some(c(-1., 2.)));
        assert_eq!(parse_complex("1e-3+1e-3j"), Some(c(1e-3, 1e-3)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn slot_energy_is_one_for_trace_two() {
        for d in [DstcDesign::construction_1(), DstcDesign::from_name("transcendental:1,1,-1,1").unwrap()] {
            for s in [qpsk(), qam16()] {
                let (ea, eb) = d.average_slot_energy(&s);
                assert!((ea - 1.0).abs() < 1e-9 && (eb - 1.0).abs() < 1e-9, "{ea} {eb}");
            }
        }
    }
}
