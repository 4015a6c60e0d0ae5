use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nanotube(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nanotube"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("NANOTUBE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Data rows of a CSV artifact, header comments and column line removed.
fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn moments_all_methods_agree() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["moments", "--p", "5", "--q", "1", "--kmax", "8", "--methods", "all"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("moments.csv")).unwrap();
    assert!(text.starts_with("# nanotube "));
    assert!(text.contains("# seed: "));
    assert!(text.contains("# cross_check: PASS"));
    let table = rows(&dir.path().join("moments.csv"));
    assert_eq!(table.len(), 4 * 9);
    for k in 0..=8 {
        let values: Vec<&str> = table.iter().filter(|r| r[0] == k.to_string()).map(|r| r[2].as_str()).collect();
        assert_eq!(values.len(), 4);
        assert!(values.iter().all(|v| *v == values[0]), "k={k}: {values:?}");
    }
    // μ_6(Λ*₅,₁) exceeds the triangular value 35169
    assert!(table.iter().any(|r| r[0] == "6" && r[2] == "35181"));
}

#[test]
fn zigzag_five_piece_boundaries() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["pdf", "--p", "5", "--q", "0", "--grid", "2000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut pieces: Vec<(f64, f64)> = rows(&dir.path().join("pieces.csv"))
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let expected = [(0.146, 2.618), (0.146, 2.618), (0.382, 6.854), (0.382, 6.854), (1.0, 9.0)];
    for ((lo, hi), (elo, ehi)) in pieces.iter().zip(expected) {
        assert!((lo - elo).abs() < 5e-4 && (hi - ehi).abs() < 5e-4, "({lo}, {hi})");
    }
    let grid = rows(&dir.path().join("pdf.csv"));
    assert_eq!(grid.len(), 2000);
    let last: f64 = grid.last().unwrap()[2].parse().unwrap();
    assert!((last - 1.0).abs() < 1e-9);
    assert!(rows(&dir.path().join("atoms.csv")).is_empty());
}

#[test]
fn zigzag_six_reports_its_atom() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["pdf", "--p", "6", "--q", "0", "--grid", "100"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&dir.path().join("atoms.csv")), vec![vec!["1".to_string(), "1/6".to_string()]]);
}

#[test]
fn validation_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["moments", "--p", "3", "--q", "1"],
        vec!["moments", "--p", "1", "--q", "1", "--allow-thin"],
        vec!["moments", "--p", "5"],
        vec!["moments", "--p", "5", "--q", "1", "--methods", "triangular_sum"],
        vec!["moments", "--p", "5", "--q", "1", "--methods", "nonsense"],
        vec!["sample", "--triangular", "--c", "2"],
        vec!["pdf", "--triangular", "--cutoff", "10"],
        vec!["verify", "--suite", "slow"],
        vec!["frobnicate"],
    ] {
        let o = nanotube(dir.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn thin_tubes_with_override() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["moments", "--p", "3", "--q", "1", "--allow-thin", "--kmax", "6"]);
    assert_eq!(code(&o), 0);
    let o = nanotube(dir.path(), &["pdf", "--p", "3", "--q", "1", "--allow-thin", "--grid", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn non_convergence_exits_three() {
    let dir = TempDir::new().unwrap();
    // two-point panels cannot resolve the logarithmic peak at 1 on a fine grid
    let o = nanotube(
        dir.path(),
        &["pdf", "--triangular", "--grid", "20000", "--nodes", "2", "--cutoff", "80"],
    );
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn identical_runs_give_identical_files() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let args = ["sample", "--p", "7", "--q", "2", "--n", "5000", "--seed", "42"];
        assert_eq!(code(&nanotube(dir.path(), &args)), 0);
        assert_eq!(code(&nanotube(dir.path(), &["pdf", "--p", "5", "--q", "1", "--grid", "300"])), 0);
    }
    for name in ["samples.csv", "histogram.csv", "pdf.csv", "pieces.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let text = fs::read_to_string(a.path().join("samples.csv")).unwrap();
    assert!(text.contains("# seed: 42\n"));
    let counts: u64 = rows(&a.path().join("histogram.csv")).iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(counts, 5000);
}

#[test]
fn json_mirrors_csv() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["--format", "json", "moments", "--triangular", "--kmax", "30"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("moments.json")).unwrap()).unwrap();
    assert_eq!(doc["meta"]["command"], "moments");
    assert!(doc["meta"]["seed"].is_u64());
    let data = doc["data"].as_array().unwrap();
    assert_eq!(data.len(), 5 * 31);
    assert_eq!(data[6]["value"], 35169);
    // values beyond i64 stay exact as strings
    let big = data.iter().find(|r| r["k"] == 30 && r["method"] == "oracle").unwrap();
    assert!(big["value"].is_string());

    let csv = TempDir::new().unwrap();
    assert_eq!(code(&nanotube(csv.path(), &["moments", "--triangular", "--kmax", "30"])), 0);
    let table = rows(&csv.path().join("moments.csv"));
    for (row, obj) in table.iter().zip(data) {
        let value = match &obj["value"] {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        assert_eq!(row[2], value);
    }
}

#[test]
fn mgf_columns() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["mgf", "--p", "5", "--q", "1", "--t", "-1,0,0.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = rows(&dir.path().join("mgf.csv"));
    assert_eq!(table.len(), 3);
    let m0: f64 = table[1][1].parse().unwrap();
    assert!((m0 - 1.0).abs() < 1e-12);
    let m_neg: f64 = table[0][1].parse().unwrap();
    assert!(m_neg > 0.0 && m_neg < 1.0);
}

#[test]
fn lattice_artifacts() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["lattice", "--rings", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&dir.path().join("edges.csv")).len(), 150);
    assert_eq!(rows(&dir.path().join("loops.csv")).len(), 52);
    let spectrum = rows(&dir.path().join("spectrum.csv"));
    assert_eq!(spectrum.len(), 52);
    let values: Vec<f64> = spectrum.iter().map(|r| r[1].parse().unwrap()).collect();
    // Gershgorin: row sums are 1.5·deg ≤ 9; the trace is Σ deg/2 = #edges
    assert!(values.iter().all(|l| l.abs() <= 9.0 + 1e-9));
    assert!((values.iter().sum::<f64>() - 150.0).abs() < 1e-8);
    let moments = rows(&dir.path().join("trace_moments.csv"));
    assert_eq!(moments.len(), 7);
    assert_eq!(moments[0][1], "1");
    assert_eq!(moments[2][3], "15");
}

#[test]
fn quick_suite_passes() {
    let dir = TempDir::new().unwrap();
    let o = nanotube(dir.path(), &["verify", "--suite", "quick"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report = rows(&dir.path().join("verify.csv"));
    assert_eq!(report.len(), 10);
    assert!(report.iter().all(|r| r[2] == "PASS"));
}

#[test]
fn out_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nanotube"))
        .args(["moments", "--p", "5", "--q", "0", "--kmax", "3"])
        .env("NANOTUBE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("moments.csv").exists());
}
