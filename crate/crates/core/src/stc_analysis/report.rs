//! Text and CSV listings of rank spectra and subspace lists.

use std::fmt::Write;

use super::fmt_complex;
use super::{FadeSubspace, RankSpectrum};

/// Human readable summary: rank histogram then one subspace per line.
pub fn spectrum_text(sp: &RankSpectrum) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "design: {}  signal set: {}", sp.design, sp.signal_set);
    let _ = writeln!(out, "difference vectors: {}", sp.total);
    let _ = writeln!(out, "rank histogram:");
    for (r, n) in &sp.counts {
        let _ = writeln!(out, "  rank {r}: {n}");
    }
    let _ = writeln!(out, "min rank: {}", sp.min_rank);
    if sp.trivial_only() {
        let _ = writeln!(out, "singular fade subspaces: trivial subspace only");
    } else {
        let _ = writeln!(out, "non-trivial singular fade subspaces: {}", sp.subspaces.len());
        for (s, w) in sp.subspaces.iter().zip(&sp.witnesses) {
            let delta: Vec<String> = w.delta.iter().map(|z| fmt_complex(*z)).collect();
            let _ = writeln!(out, "  dim {}  {}  (dx = [{}])", s.dim(), s, delta.join(", "));
        }
    }
    out
}

/// Plain listing of subspaces, one per line.
pub fn subspaces_text(list: &[FadeSubspace]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "singular fade subspaces: {}", list.len());
    for s in list {
        let _ = writeln!(out, "  dim {}  {}", s.dim(), s);
    }
    out
}

/// CSV with columns `kind,key,dim,ratio,basis` where `kind` is `rank` for
/// histogram rows (key = rank, dim = count) and `subspace` for subspace rows.
pub fn spectrum_csv(sp: &RankSpectrum) -> String {
    let mut out = String::from("kind,key,dim,ratio,basis\n");
    for (r, n) in &sp.counts {
        let _ = writeln!(out, "rank,{r},{n},,");
    }
    for (i, s) in sp.subspaces.iter().enumerate() {
        out.push_str(&subspace_row(i, s));
    }
    out
}

/// CSV listing of a subspace list with the same columns as [`spectrum_csv`].
pub fn subspaces_csv(list: &[FadeSubspace]) -> String {
    let mut out = String::from("kind,key,dim,ratio,basis\n");
    for (i, s) in list.iter().enumerate() {
        out.push_str(&subspace_row(i, s));
    }
    out
}

fn subspace_row(i: usize, s: &FadeSubspace) -> String {
    let ratio = s.canonical_ratio().map(|r| r.to_string()).unwrap_or_default();
    let basis: Vec<String> = s
        .basis()
        .iter()
        .map(|b| {
            let e: Vec<String> = b.iter().map(|z| fmt_complex(*z)).collect();
            e.join(" ")
        })
        .collect();
    format!("subspace,{i},{},{ratio},{}\n", s.dim(), basis.join(" | "))
}
