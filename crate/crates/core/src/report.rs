//! BER tables: CSV in and out, and gnuplot-ready per-curve data files.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sim::BerRecord;

/// Column order of the BER CSV.
pub const CSV_HEADER: &[&str] = &[
    "scheme",
    "design",
    "signal_set",
    "fading",
    "k_factor_db",
    "snr_db",
    "frames",
    "bits",
    "bit_errors",
    "ber",
    "ci_low",
    "ci_high",
];

pub fn write_csv<W: Write>(w: W, records: &[BerRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    if records.is_empty() {
        wr.write_record(CSV_HEADER)?;
    }
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn csv_string(records: &[BerRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
}

/// Reads a BER CSV, insisting on the exact header.
pub fn read_csv<R: Read>(r: R) -> Result<Vec<BerRecord>> {
    let mut rd = csv::Reader::from_reader(r);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!(
            "unexpected CSV header: {}",
            header.join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rd.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// One curve of plot data.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFile {
    pub file_name: String,
    pub scheme: String,
    pub design: String,
    pub signal_set: String,
    pub fading: String,
    pub k_factor_db: Option<f64>,
    pub contents: String,
    pub points: usize,
}

/// Plot files, an index, and warnings about points that cannot be drawn on
/// a log axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub files: Vec<PlotFile>,
    pub index: String,
    pub warnings: Vec<String>,
}

fn sanitize(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

/// Groups records into one two-column (snr_db, ber) file per curve.
pub fn plot_data(records: &[BerRecord]) -> PlotData {
    type Key = (String, String, String, String, String);
    let mut groups: BTreeMap<Key, (Option<f64>, Vec<&BerRecord>)> = BTreeMap::new();
    for r in records {
        let k = (
            r.scheme.clone(),
            r.design.clone(),
            r.signal_set.clone(),
            r.fading.clone(),
            r.k_factor_db.map(|v| v.to_string()).unwrap_or_default(),
        );
        groups.entry(k).or_insert((r.k_factor_db, Vec::new())).1.push(r);
    }
    let mut files = Vec::new();
    let mut warnings = Vec::new();
    let mut index = String::from("# file\tscheme\tdesign\tsignal_set\tfading\tk_factor_db\tpoints\n");
    for ((scheme, design, signal_set, fading, kstr), (k, mut rows)) in groups {
        rows.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        let mut stem = format!("{scheme}_{design}_{signal_set}_{fading}");
        if !kstr.is_empty() {
            stem.push_str(&format!("_k{kstr}"));
        }
        let file_name = format!("{}.dat", sanitize(&stem));
        let mut contents = format!(
            "# scheme={scheme} design={design} signal_set={signal_set} fading={fading} k_factor_db={kstr}\n# snr_db ber\n"
        );
        for r in &rows {
            if r.ber == 0.0 {
                warnings.push(format!(
                    "{file_name}: BER is 0 at {} dB and will not show on a log axis",
                    r.snr_db
                ));
            }
            contents.push_str(&format!("{} {}\n", r.snr_db, r.ber));
        }
        index.push_str(&format!(
            "{file_name}\t{scheme}\t{design}\t{signal_set}\t{fading}\t{kstr}\t{}\n",
            rows.len()
        ));
        files.push(PlotFile {
            file_name,
            scheme,
            design,
            signal_set,
            fading,
            k_factor_db: k,
            contents,
            points: rows.len(),
        });
    }
    PlotData {
        files,
        index,
        warnings,
    }
}

/// Reads the (snr_db, ber) pairs back from a plot file.
pub fn parse_plot_file(contents: &str) -> Result<Vec<(f64, f64)>> {
    contents
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace();
            let p = |t: Option<&str>| -> Result<f64> {
                t.and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Config(format!("bad plot line '{l}'")))
            };
            Ok((p(it.next())?, p(it.next())?))
        })
        .collect()
}
