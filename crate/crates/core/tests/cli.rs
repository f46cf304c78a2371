use std::path::Path;
use std::process::{Command, Output};

const BINARY: &str = r#"{"inputs": [{"name": "x", "outcomes": ["0", "1"]}, {"name": "y", "outcomes": ["0", "1"]}]}"#;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxlogic"))
        .args(args)
        .current_dir(dir)
        .env("BOXLOGIC_CACHE_DIR", dir.join("cache"))
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bin.json"), BINARY).unwrap();
    dir
}

fn generate(dir: &Path, k: &str, extra: &[&str]) -> String {
    let mut args = vec!["generate", "--spec", "bin.json", "-k", k];
    args.extend_from_slice(extra);
    let out = run(dir, &args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json(&out)["cache"].as_str().unwrap().to_string()
}

#[test]
fn generate_reports_counts() {
    let dir = setup();
    let out = run(dir.path(), &["generate", "--spec", "bin.json", "-k", "2"]);
    let doc = json(&out);
    assert_eq!(doc["elements"], 82);
    assert_eq!(doc["atoms"], 16);
}

#[test]
fn check_output_is_reproducible_from_the_cache() {
    let dir = setup();
    let a = generate(dir.path(), "2", &[]);
    let first = run(dir.path(), &["check", "--structure", &a]);
    assert_eq!(first.status.code(), Some(0));
    // Regenerating serially must write the same file and give the same report.
    let bytes = std::fs::read(&a).unwrap();
    let b = generate(dir.path(), "2", &["--serial"]);
    assert_eq!(a, b);
    assert_eq!(std::fs::read(&b).unwrap(), bytes);
    let second = run(dir.path(), &["check", "--structure", &b]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn cache_dir_flag_overrides_environment() {
    let dir = setup();
    let out = run(dir.path(), &["generate", "--spec", "bin.json", "-k", "1", "--cache-dir", "elsewhere"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("elsewhere").is_dir());
    assert!(!dir.path().join("cache").exists());
}

#[test]
fn lp_max_gives_four_thirds() {
    let dir = setup();
    let s = generate(dir.path(), "3", &[]);
    std::fs::write(dir.path().join("obj.txt"), "x0x0x0\nx1y1y0\ny0x1y1\ny1y0x1\n").unwrap();
    let out = run(dir.path(), &["lp-max", "--structure", &s, "--objective", "obj.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["optimum"], "4/3");
}

#[test]
fn localized_elements_of_two_boxes() {
    let dir = setup();
    let s = generate(dir.path(), "2", &[]);
    let out = run(dir.path(), &["localized", "--structure", &s, "--boxes", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 6);
}

#[test]
fn lo_check_on_two_boxes_has_no_violations() {
    let dir = setup();
    let s = generate(dir.path(), "2", &[]);
    let out = run(dir.path(), &["lo-check", "--structure", &s]);
    assert_eq!(out.status.code(), Some(0));
    let entries = json(&out);
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 12);
    assert!(entries.iter().all(|e| e["violated"] == false && e["lp_max"] == "1/1"));
}

#[test]
fn exit_codes() {
    let dir = setup();
    // Element cap.
    let out = run(dir.path(), &["generate", "--spec", "bin.json", "-k", "3", "--max-elements", "100"]);
    assert_eq!(out.status.code(), Some(3));
    // Missing cache file.
    let out = run(dir.path(), &["check", "--structure", "nope.cache"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed spec.
    std::fs::write(dir.path().join("bad.json"), "{").unwrap();
    let out = run(dir.path(), &["generate", "--spec", "bad.json", "-k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Tampered cache.
    let s = generate(dir.path(), "1", &[]);
    let text = std::fs::read_to_string(&s).unwrap();
    let last = text.trim_end().rsplit('\n').next().unwrap().to_string();
    std::fs::write(&s, text.replace(&last, &format!("{last} 0"))).unwrap();
    let out = run(dir.path(), &["check", "--structure", &s]);
    assert_eq!(out.status.code(), Some(2));
}
