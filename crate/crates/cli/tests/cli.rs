use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dstc-relay"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("DSTC_RELAY_WORKERS").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &str = "
sim.schemes = dnf_xor dstc:construction1 dstc:construction2
sim.signal_set = qpsk
sim.snr_db = 0, 10, 20
sim.max_frames = 3000
sim.min_bit_errors = 50
sim.chunk_frames = 500
channel.fading = rician
channel.k_factor_db = 5
";

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("run.conf");
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn analyze_spatial_multiplexing_lists_fourteen_subspaces() {
    let o = run(&["analyze", "spatial-mux2", "--signal-set", "4-PSK"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("non-trivial singular fade subspaces: 14"), "{out}");
}

#[test]
fn analyze_alamouti_trivial_only() {
    let o = run(&["analyze", "alamouti"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("trivial subspace only"));
    assert!(out.contains("min rank: 2"));
}

#[test]
fn analyze_identity_dstc_reports_witness() {
    let o = run(&["analyze", "identity", "-s", "qpsk"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("NOT singularity minimal"), "{out}");
    assert!(out.contains("witness"));
}

#[test]
fn analyze_construction_reports_gain() {
    let o = run(&["analyze", "construction1", "-s", "16qam"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("singularity minimal: yes"), "{out}");
    assert!(out.contains("coding gain: 0.6324555320"), "{out}");
}

#[test]
fn analyze_csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.csv");
    let o = run(&["analyze", "ciod2", "--format", "csv", "-o", p.to_str().unwrap()]);
    assert!(o.status.success());
    let body = fs::read_to_string(p).unwrap();
    assert!(body.starts_with("kind,key,dim,ratio,basis\n"));
    assert_eq!(body.lines().filter(|l| l.starts_with("subspace,")).count(), 2);
}

#[test]
fn unknown_design_is_config_error() {
    let o = run(&["analyze", "no-such-design"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["analyze", "alamouti", "-s", "7qam"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_usage_is_config_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn list_designs() {
    let o = run(&["list-designs"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in ["alamouti", "qod4", "construction1", "construction2", "transcendental", "sim.schemes"] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn simulate_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let csv = dir.path().join("out.csv");
    let o = run(&["simulate", cfg.to_str().unwrap(), "--seed", "3", "-o", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let body = fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheme,design,signal_set,fading,k_factor_db,snr_db,frames,bits,bit_errors,ber,ci_low,ci_high"
    );
    assert_eq!(lines.count(), 9);
    assert!(body.contains("dstc,construction2,4psk,rician,5.0,"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 3);
    assert_eq!(manifest["records"], 9);
    assert_eq!(manifest["config"]["sim.seed"], "3");
}

#[test]
fn simulate_is_worker_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("w1.csv");
    let b = dir.path().join("w8.csv");
    let c = dir.path().join("env.csv");
    for (p, w) in [(&a, "1"), (&b, "8")] {
        let o = run(&["simulate", cfg.to_str().unwrap(), "--seed", "1", "--workers", w, "-o", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let o = bin()
        .args(["simulate", cfg.to_str().unwrap(), "--seed", "1", "-o", c.to_str().unwrap()])
        .env("DSTC_RELAY_WORKERS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("env.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["workers"], 3);
    let ra = fs::read(&a).unwrap();
    assert_eq!(ra, fs::read(&b).unwrap());
    assert_eq!(ra, fs::read(&c).unwrap());
}

#[test]
fn simulate_uses_output_key_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{SMALL}output.csv = sub/res.csv\n");
    let cfg = write_config(dir.path(), &body);
    let o = run(&["simulate", cfg.to_str().unwrap(), "--snr", "0", "--max-frames", "100"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("sub/res.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(dir.path().join("sub/res.manifest.json").exists());
}

#[test]
fn simulate_config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sim.schemes = dnf_xor\nsim.snr_db = 0\nsim.what = 1\n");
    assert_eq!(run(&["simulate", cfg.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.path().join("missing.conf");
    assert_eq!(run(&["simulate", missing.to_str().unwrap()]).status.code(), Some(1));
    let cfg = write_config(dir.path(), SMALL);
    let o = bin()
        .args(["simulate", cfg.to_str().unwrap()])
        .env("DSTC_RELAY_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("out.csv");
    let o = run(&["simulate", cfg.to_str().unwrap(), "--snr", "0", "--max-frames", "10", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plotdata_splits_curves() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let csv = dir.path().join("r.csv");
    assert!(run(&["simulate", cfg.to_str().unwrap(), "-o", csv.to_str().unwrap()]).status.success());
    let out = dir.path().join("plots");
    let o = run(&["plotdata", csv.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let index = fs::read_to_string(out.join("index.tsv")).unwrap();
    assert_eq!(index.lines().count(), 4);
    let dat = fs::read_to_string(out.join("dstc_construction1_4psk_rician_k5.dat")).unwrap();
    let rows: Vec<&str> = dat.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "not,a,ber,table\n").unwrap();
    assert_eq!(run(&["plotdata", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for name in ["fig_rayleigh.conf", "fig_rician0.conf", "fig_rician5.conf"] {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("x.csv");
        let o = run(&[
            "simulate",
            dir.join(name).to_str().unwrap(),
            "--snr",
            "10",
            "--max-frames",
            "10",
            "-o",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
