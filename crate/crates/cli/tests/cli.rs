use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lampwalk(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lampwalk"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .env_remove("LAMPWALK_OUT_DIR")
        .env_remove("LAMPWALK_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn harmonic_verify_is_exact() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = lampwalk(&out, &["harmonic-verify", "--window", "200"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&out.join("harmonic-verify.csv"));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config_hash="));
    assert_eq!(lines.next(), Some("x,residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 401);
    assert!(rows.iter().all(|r| r.ends_with(",0/1")));
    let manifest = read(&out.join("harmonic-verify.manifest"));
    assert!(manifest.contains("config.window=200"));
}

#[test]
fn malformed_config_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[tv]\nshift = \"one\"\n").unwrap();
    let o = lampwalk(&out, &["--config", cfg.to_str().unwrap(), "tv"]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());

    std::fs::write(&cfg, "[no-such-command]\nx = 1\n").unwrap();
    assert_eq!(code(&lampwalk(&out, &["--config", cfg.to_str().unwrap(), "tv"])), 2);
    std::fs::write(&cfg, "[tv]\nunknown-key = 1\n").unwrap();
    assert_eq!(code(&lampwalk(&out, &["--config", cfg.to_str().unwrap(), "tv"])), 2);
    assert!(!out.exists());
}

#[test]
fn missing_metric_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&lampwalk(&out, &["walk-speed"])), 2);
    assert_eq!(code(&lampwalk(&out, &["walk-speed", "--preset", "symz", "--metric", "word"])), 2);
    assert!(!out.exists());
}

#[test]
fn monte_carlo_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["couple", "--trials", "3000", "--ns", "4,16,64", "--seed", "9"];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&lampwalk(&a, &args)), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_lampwalk"))
        .arg("--out-dir")
        .arg(&b)
        .args(args)
        .env("LAMPWALK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(read(&a.join("couple.csv")), read(&b.join("couple.csv")));
}

#[test]
fn non_normal_demo_reports_violation() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = lampwalk(&out, &["non-normal-demo", "--runs", "20"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invariant violation"));
    assert!(out.join("non-normal-demo.csv").exists());
}

#[test]
fn infinite_class_hits_the_cap() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = lampwalk(&out, &["fc-class", "--preset", "delta-dinfty", "--element", "a1", "--cap", "512"]);
    assert_eq!(code(&o), 3);
    assert!(!out.exists());
}

#[test]
fn flags_override_config() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "threads = 2\n[plateau]\nn-max = 6\ndelta = \"1/2\"\n").unwrap();
    let o = lampwalk(&out, &["--config", cfg.to_str().unwrap(), "plateau", "--n-max", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = read(&out.join("plateau.manifest"));
    assert!(manifest.contains("config.n-max=4"));
    assert!(manifest.contains("config.delta=\"1/2\""));
    assert!(manifest.contains("threads=2"));
    let rows = read(&out.join("plateau.csv")).lines().count();
    assert_eq!(rows, 2 + 5);
}

#[test]
fn list_presets_names_every_family() {
    let dir = TempDir::new().unwrap();
    let o = lampwalk(dir.path(), &["list-presets"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["ll-z2", "symz", "symz-demo", "da-q2", "plateau-z2", "delta-d8", "embed-s3"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name} "))), "missing {name}");
    }
}

#[test]
fn cyclic_lamps_fail_validation() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&lampwalk(&out, &["delta-build", "--lamps", "cyclic:4,dihedral:4"])), 2);
    assert_eq!(code(&lampwalk(&out, &["delta-build", "--lamps", "klein,dihedral:4"])), 0);
    assert!(read(&out.join("delta-build.csv")).contains("klein"));
}
