//! One frame of each two-way relaying scheme.
//!
//! * XOR baseline: one MA slot, relay joint ML of (x_A, x_B), one BC slot
//!   carrying μ(l_A ⊕ l_B). λ bits per direction in 2 channel uses.
//! * DSTC: two MA slots carrying the DSTC codeword, relay ML of all four
//!   symbols, two BC slots. 2λ bits per direction in 4 channel uses.
//!
//! Noise has unit variance; all transmissions use amplitude √es on unit
//! energy symbols, so es is the SNR.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_gaussian, ChannelRealization};
use crate::constellation::SignalSet;
use crate::dstc::DstcDesign;
use crate::error::{Error, Result};
use crate::relay_decoder::DecoderKind;

/// A relay network-coding map S × S → S', stored as output indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkMap {
    table: Vec<Vec<usize>>,
    out_size: usize,
}

impl NetworkMap {
    /// Wraps a square table; entries must be below `out_size`.
    pub fn from_table(table: Vec<Vec<usize>>, out_size: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::Config("network map table must be square and nonempty".into()));
        }
        if table.iter().flatten().any(|&v| v >= out_size) {
            return Err(Error::Config("network map entry outside the output set".into()));
        }
        Ok(Self { table, out_size })
    }

    /// Bitwise XOR of the labels, mapped back into S.
    pub fn xor(s: &SignalSet) -> Self {
        let m = s.len();
        let table = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| s.index_of_label(s.label(a) ^ s.label(b)))
                    .collect()
            })
            .collect();
        Self { table, out_size: m }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// True iff every row and every column of the table is injective.
    pub fn satisfies_exclusive_law(&self) -> bool {
        let n = self.size();
        let mut seen = vec![usize::MAX; self.out_size];
        for (stamp, fixed) in (0..n).enumerate() {
            for a in 0..n {
                let v = self.table[a][fixed];
                if seen[v] == 2 * stamp {
                    return false;
                }
                seen[v] = 2 * stamp;
            }
            for b in 0..n {
                let v = self.table[fixed][b];
                if seen[v] == 2 * stamp + 1 {
                    return false;
                }
                seen[v] = 2 * stamp + 1;
            }
        }
        true
    }
}

/// Exclusive-law check of `m` as a map on `s`.
pub fn check_exclusive_law(m: &NetworkMap, s: &SignalSet) -> bool {
    m.size() == s.len() && m.satisfies_exclusive_law()
}

/// Error bookkeeping for one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameResult {
    pub bits_per_direction: u64,
    pub channel_uses: u32,
    /// Bit errors in B's estimate of A's message.
    pub bit_errors_a_to_b: u64,
    /// Bit errors in A's estimate of B's message.
    pub bit_errors_b_to_a: u64,
    /// Wrong symbol decisions at the relay.
    pub relay_symbol_errors: u64,
}

impl FrameResult {
    pub fn bit_errors(&self) -> u64 {
        self.bit_errors_a_to_b + self.bit_errors_b_to_a
    }

    /// Bits carried in both directions.
    pub fn bits(&self) -> u64 {
        2 * self.bits_per_direction
    }
}

fn check_es(es: f64) -> Result<f64> {
    if es > 0.0 && es.is_finite() {
        Ok(es.sqrt())
    } else {
        Err(Error::Config(format!("transmit energy must be positive, got {es}")))
    }
}

/// Coherent ML detection of a single S symbol through gain `g`.
fn detect(s: &SignalSet, y: Complex64, g: Complex64) -> usize {
    if g.norm() == 0.0 {
        0
    } else {
        s.nearest(y / g)
    }
}

/// BC phase for one relay symbol; returns (errors at A about B, errors at B about A).
fn broadcast<R: Rng + ?Sized>(
    s: &SignalSet,
    amp: f64,
    ch: &ChannelRealization,
    relay_label: u32,
    label_a: u32,
    label_b: u32,
    rng: &mut R,
) -> (u64, u64) {
    let x_r = s.symbol_for_bits(relay_label);
    let ga = ch.g_a * amp;
    let gb = ch.g_b * amp;
    let y_a = ga * x_r + complex_gaussian(rng, 1.0);
    let y_b = gb * x_r + complex_gaussian(rng, 1.0);
    let at_a = s.label(detect(s, y_a, ga)) ^ label_a;
    let at_b = s.label(detect(s, y_b, gb)) ^ label_b;
    (
        u64::from((at_a ^ label_b).count_ones()),
        u64::from((at_b ^ label_a).count_ones()),
    )
}

/// One frame of the XOR baseline.
pub fn run_frame_dnf_xor<R: Rng + ?Sized>(
    s: &SignalSet,
    es: f64,
    ch: &ChannelRealization,
    rng: &mut R,
) -> Result<FrameResult> {
    let amp = check_es(es)?;
    let m = s.len();
    let ia = rng.random_range(0..m);
    let ib = rng.random_range(0..m);
    let ha = ch.h_a * amp;
    let hb = ch.h_b * amp;
    let y = ha * s.point(ia) + hb * s.point(ib) + complex_gaussian(rng, 1.0);

    let pts = s.points();
    let mut best = f64::INFINITY;
    let mut dec = (0, 0);
    for (a, &p) in pts.iter().enumerate() {
        let r = y - ha * p;
        for (b, &q) in pts.iter().enumerate() {
            let d = (r - hb * q).norm_sqr();
            if d < best {
                best = d;
                dec = (a, b);
            }
        }
    }
    let relay_label = s.label(dec.0) ^ s.label(dec.1);
    let (la, lb) = (s.label(ia), s.label(ib));
    let (e_b_at_a, e_a_at_b) = broadcast(s, amp, ch, relay_label, la, lb, rng);
    Ok(FrameResult {
        bits_per_direction: u64::from(s.bits_per_symbol()),
        channel_uses: 2,
        bit_errors_a_to_b: e_a_at_b,
        bit_errors_b_to_a: e_b_at_a,
        relay_symbol_errors: u64::from(dec.0 != ia) + u64::from(dec.1 != ib),
    })
}

/// One frame of the DSTC scheme.
pub fn run_frame_dstc<R: Rng + ?Sized>(
    d: &DstcDesign,
    s: &SignalSet,
    es: f64,
    ch: &ChannelRealization,
    rng: &mut R,
    decoder: DecoderKind,
) -> Result<FrameResult> {
    let amp = check_es(es)?;
    decoder.check(d, s)?;
    let m = s.len();
    let idx: [usize; 4] = std::array::from_fn(|_| rng.random_range(0..m));
    let x = idx.map(|i| s.point(i));
    let cw = d.codeword([x[0], x[1]], [x[2], x[3]]);
    let ha = ch.h_a * amp;
    let hb = ch.h_b * amp;
    let y = [
        ha * cw[(0, 0)] + hb * cw[(1, 0)] + complex_gaussian(rng, 1.0),
        ha * cw[(0, 1)] + hb * cw[(1, 1)] + complex_gaussian(rng, 1.0),
    ];
    let dec = decoder.decode(d, ha, hb, y, s)?;
    let mut res = FrameResult {
        bits_per_direction: 2 * u64::from(s.bits_per_symbol()),
        channel_uses: 4,
        relay_symbol_errors: idx.iter().zip(&dec.indices).filter(|(a, b)| a != b).count() as u64,
        ..Default::default()
    };
    for slot in 0..2 {
        let relay_label = s.label(dec.indices[slot]) ^ s.label(dec.indices[slot + 2]);
        let (la, lb) = (s.label(idx[slot]), s.label(idx[slot + 2]));
        let (e_b_at_a, e_a_at_b) = broadcast(s, amp, ch, relay_label, la, lb, rng);
        res.bit_errors_a_to_b += e_a_at_b;
        res.bit_errors_b_to_a += e_b_at_a;
    }
    Ok(res)
}
