mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dstc_relay::constellation::SignalSet;
use dstc_relay::dstc::{coding_gain, is_singularity_minimal_with_budget, DstcDesign, DSTC_CATALOGUE};
use dstc_relay::report::{plot_data, read_csv, write_csv};
use dstc_relay::sim::{run_sweep, BerRecord};
use dstc_relay::stc_analysis::report::{spectrum_csv, spectrum_text};
use dstc_relay::stc_analysis::{named_design, rank_spectrum, AnalysisOptions, DESIGN_NAMES};

use config::{parse_snr_list, RunConfig};

const WORKERS_ENV: &str = "DSTC_RELAY_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "dstc-relay", version, about = "Two-way relay PNC with distributed space-time codes")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank spectrum and singular fade subspaces of a design; for DSTCs also
    /// singularity minimality and coding gain.
    Analyze {
        /// Space-time design or DSTC name (see list-designs).
        design: String,
        /// Signal set, e.g. qpsk, 8psk, 16qam, qpsk:rot=0.5236.
        #[arg(short, long, default_value = "qpsk")]
        signal_set: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Cap on enumerated difference vectors.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Run BER sweeps described by a config file and write CSV plus a JSON
    /// manifest.
    Simulate {
        config: PathBuf,
        /// Master seed (overrides sim.seed; default 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (overrides DSTC_RELAY_WORKERS and sim.workers).
        #[arg(long)]
        workers: Option<usize>,
        /// CSV path (overrides output.csv).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// SNR list or start:step:stop (overrides sim.snr_db).
        #[arg(long)]
        snr: Option<String>,
        #[arg(long)]
        max_frames: Option<u64>,
        #[arg(long)]
        min_errors: Option<u64>,
    },
    /// Split BER CSVs into per-curve two-column data files plus an index.
    Plotdata {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List the design catalogue, signal sets and config keys.
    ListDesigns,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

/// Failure class, mapped to the process exit code.
enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Runtime(_) => 2,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Self::Config(e) | Self::Runtime(e) => e,
        }
    }
}

fn cfg_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Config(e.into())
}

fn rt_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let res = match cli.command {
        Command::Analyze {
            design,
            signal_set,
            format,
            output,
            budget,
        } => cmd_analyze(&design, &signal_set, format, output.as_deref(), budget),
        Command::Simulate {
            config,
            seed,
            workers,
            output,
            snr,
            max_frames,
            min_errors,
        } => cmd_simulate(
            &config,
            Overrides {
                seed,
                workers,
                output,
                snr,
                max_frames,
                min_errors,
            },
        ),
        Command::Plotdata { csv, out_dir } => cmd_plotdata(&csv, &out_dir),
        Command::ListDesigns => cmd_list_designs(),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(rt_err),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(rt_err)
        }
    }
}

fn cmd_analyze(name: &str, signal_set: &str, format: Format, output: Option<&Path>, budget: Option<u128>) -> CmdResult {
    let s = SignalSet::from_descriptor(signal_set).map_err(cfg_err)?;
    let mut opts = AnalysisOptions::default();
    if let Some(b) = budget {
        opts.budget = b;
    }
    let (design, dstc) = match named_design(name) {
        Ok(d) => (d, None),
        Err(_) => {
            let d = DstcDesign::from_name(name).map_err(cfg_err)?;
            (d.to_linear_design(), Some(d))
        }
    };
    let sp = rank_spectrum(&design, &s, &opts).map_err(rt_err)?;
    let text = match format {
        Format::Csv => spectrum_csv(&sp),
        Format::Text => {
            let mut t = spectrum_text(&sp);
            if let Some(d) = dstc {
                let chk = is_singularity_minimal_with_budget(&d, &s, opts.budget.max(1)).map_err(rt_err)?;
                if chk.minimal {
                    t.push_str(&format!(
                        "singularity minimal: yes (min |det| = {:.6}, {} pairs)\n",
                        chk.min_abs_det, chk.pairs_checked
                    ));
                } else {
                    let (a, b) = chk.witness.expect("witness for non-minimal design");
                    t.push_str(&format!(
                        "NOT singularity minimal: witness dx_A = [{}, {}], dx_B = [{}, {}]\n",
                        a[0], a[1], b[0], b[1]
                    ));
                }
                t.push_str(&format!(
                    "coding gain: {:.10} (d_min = {:.10})\n",
                    coding_gain(&d, &s),
                    s.min_distance()
                ));
            }
            t
        }
    };
    emit(output, &text)
}

#[derive(Debug, Default)]
struct Overrides {
    seed: Option<u64>,
    workers: Option<usize>,
    output: Option<PathBuf>,
    snr: Option<String>,
    max_frames: Option<u64>,
    min_errors: Option<u64>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    config_path: String,
    config: &'a std::collections::BTreeMap<String, String>,
    master_seed: u64,
    workers: usize,
    started_unix: f64,
    finished_unix: f64,
    csv: String,
    records: usize,
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn resolve_workers(flag: Option<usize>, env: Option<String>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match env {
        Some(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| cfg_err(anyhow!("{WORKERS_ENV}: '{v}' is not a positive integer"))),
        _ => Ok(None),
    }
}

fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

fn cmd_simulate(path: &Path, ov: Overrides) -> CmdResult {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(cfg_err)?;
    let mut entries = config::parse_entries(&text).map_err(cfg_err)?;
    if let Some(seed) = ov.seed {
        entries.insert("sim.seed".into(), seed.to_string());
    }
    if let Some(w) = resolve_workers(ov.workers, std::env::var(WORKERS_ENV).ok())? {
        entries.insert("sim.workers".into(), w.to_string());
    }
    if let Some(snr) = &ov.snr {
        parse_snr_list(snr).map_err(cfg_err)?;
        entries.insert("sim.snr_db".into(), snr.clone());
    }
    if let Some(m) = ov.max_frames {
        entries.insert("sim.max_frames".into(), m.to_string());
    }
    if let Some(m) = ov.min_errors {
        entries.insert("sim.min_bit_errors".into(), m.to_string());
    }
    let cfg = RunConfig::from_entries(entries).map_err(cfg_err)?;
    let csv_path = match (&ov.output, &cfg.output_csv) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) if p.is_relative() => path.parent().unwrap_or(Path::new(".")).join(p),
        (None, Some(p)) => p.clone(),
        (None, None) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("ber");
            PathBuf::from(format!("{stem}.csv"))
        }
    };

    let started = unix_now();
    let mut records: Vec<BerRecord> = Vec::new();
    for sc in cfg.sim_configs() {
        log::info!("running {} over {} SNR points", sc.scheme, sc.snr_db.len());
        records.extend(run_sweep(&sc).map_err(rt_err)?);
    }
    let finished = unix_now();

    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(rt_err)?;
    }
    let file = fs::File::create(&csv_path)
        .with_context(|| format!("creating {}", csv_path.display()))
        .map_err(rt_err)?;
    write_csv(std::io::BufWriter::new(file), &records).map_err(rt_err)?;

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_path: path.display().to_string(),
        config: &cfg.entries,
        master_seed: cfg.base.master_seed,
        workers: cfg.base.workers,
        started_unix: started,
        finished_unix: finished,
        csv: csv_path.display().to_string(),
        records: records.len(),
    };
    let mpath = manifest_path(&csv_path);
    let json = serde_json::to_string_pretty(&manifest).map_err(rt_err)?;
    fs::write(&mpath, json + "\n")
        .with_context(|| format!("writing {}", mpath.display()))
        .map_err(rt_err)?;
    println!("wrote {} ({} rows) and {}", csv_path.display(), records.len(), mpath.display());
    Ok(())
}

fn cmd_plotdata(csvs: &[PathBuf], out_dir: &Path) -> CmdResult {
    let mut records = Vec::new();
    for p in csvs {
        let f = fs::File::open(p)
            .with_context(|| format!("opening {}", p.display()))
            .map_err(cfg_err)?;
        let rows = read_csv(f)
            .with_context(|| format!("parsing {}", p.display()))
            .map_err(cfg_err)?;
        records.extend(rows);
    }
    let pd = plot_data(&records);
    for w in &pd.warnings {
        eprintln!("warning: {w}");
    }
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(rt_err)?;
    for f in &pd.files {
        let p = out_dir.join(&f.file_name);
        fs::write(&p, &f.contents)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(rt_err)?;
    }
    let idx = out_dir.join("index.tsv");
    fs::write(&idx, &pd.index)
        .with_context(|| format!("writing {}", idx.display()))
        .map_err(rt_err)?;
    println!("wrote {} data files and {}", pd.files.len(), idx.display());
    Ok(())
}

fn cmd_list_designs() -> CmdResult {
    let mut t = String::from("space-time designs (analyze):\n");
    for (n, d) in DESIGN_NAMES {
        t.push_str(&format!("  {n:<30} {d}\n"));
    }
    t.push_str("\ndistributed space-time codes (analyze, sim.schemes = dstc:<name>):\n");
    for (n, d) in DSTC_CATALOGUE {
        t.push_str(&format!("  {n:<30} {d}\n"));
    }
    t.push_str("\nsignal sets:\n  bpsk, qpsk, <2^k>psk, <4^k>qam, optionally ':rot=<radians>'\n");
    t.push_str("\nconfig keys:\n");
    for (k, d) in config::KEYS {
        t.push_str(&format!("  {k:<30} {d}\n"));
    }
    emit(None, &t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_precedence() {
        assert_eq!(resolve_workers(Some(3), Some("5".into())).ok().flatten(), Some(3));
        assert_eq!(resolve_workers(None, Some("5".into())).ok().flatten(), Some(5));
        assert_eq!(resolve_workers(None, None).ok().flatten(), None);
        assert!(resolve_workers(None, Some("x".into())).is_err());
    }

    #[test]
    fn manifest_next_to_csv() {
        assert_eq!(manifest_path(Path::new("out/r.csv")), PathBuf::from("out/r.manifest.json"));
    }
}
