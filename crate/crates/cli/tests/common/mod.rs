#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_entangledyn"));
    c.env_remove("ENTANGLEDYN_WORKERS");
    c
}

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn config(name: &str) -> PathBuf {
    repo_root().join("configs").join(name)
}

/// Writes `text` to a fresh file under the target's scratch directory.
pub fn scratch(name: &str, text: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(format!("{}-{name}", N.fetch_add(1, Ordering::SeqCst)));
    std::fs::write(&p, text).unwrap();
    p
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header plus numeric rows of a CSV (non-numeric cells become NaN).
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect()).collect();
    (header, rows)
}

/// Rows of a long-format sweep table belonging to one sweep value, as `(t, column)`.
pub fn slice(rows: &[Vec<f64>], value: f64, col: usize) -> (Vec<f64>, Vec<f64>) {
    let last = rows[0].len() - 1;
    rows.iter().filter(|r| r[last] == value).map(|r| (r[0], r[col])).unzip()
}

/// Interior local minima `(t, y)`.
pub fn local_minima(t: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    (1..y.len() - 1).filter(|&i| y[i] < y[i - 1] && y[i] <= y[i + 1]).map(|i| (t[i], y[i])).collect()
}

/// Interior local maxima `(t, y)`.
pub fn local_maxima(t: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    (1..y.len() - 1).filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1]).map(|i| (t[i], y[i])).collect()
}
