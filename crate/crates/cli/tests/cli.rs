use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hea(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hea")).current_dir(dir).args(args).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn counts_report_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = hea(dir.path(), &["counts", "--ansatz", "xyz2f", "--n", "6", "--layers", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let counts = json(&dir.path().join("counts.json"));
    assert_eq!(counts["n_params"], 28);
    assert_eq!(counts["n_two_qubit"], 10);
    assert_eq!(counts["asap_depth"], 27);
    let meta = json(&dir.path().join("counts.json.meta.json"));
    assert_eq!(meta["command"], "counts");
}

#[test]
fn compile_pauli_reaches_unit_fidelity() {
    let dir = TempDir::new().unwrap();
    let out = hea(dir.path(), &["compile-pauli", "--pauli", "Y0X2", "--n", "4", "--theta", "-0.7", "--reference", "0110"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("compile_pauli.json"));
    assert!(report["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert!(dir.path().join("compile_pauli.json.meta.json").exists());
}

#[test]
fn ed_writes_energy() {
    let dir = TempDir::new().unwrap();
    let out = hea(dir.path(), &["ed", "--heisenberg", "4"]);
    assert!(out.status.success());
    let report = json(&dir.path().join("ed.json"));
    let e = report["energy"].as_f64().unwrap();
    assert!((e - -(1.5 + 3f64.sqrt())).abs() <= 1e-10, "{e}");
    assert!(dir.path().join("ed.json.meta.json").exists());
}

#[test]
fn vqe_is_deterministic_with_one_worker() {
    let dir = TempDir::new().unwrap();
    let args = ["--workers", "1", "vqe", "--heisenberg", "4", "--layers", "2", "--seed", "3", "--max-iter", "200"];
    let strip_time = |text: String| -> Vec<String> {
        text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string()).collect()
    };
    let mut runs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = hea(dir.path(), &[&args[..], &["--out", name]].concat());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(strip_time(std::fs::read_to_string(dir.path().join(name)).unwrap()));
        assert!(dir.path().join(format!("{name}.meta.json")).exists());
    }
    assert_eq!(runs[0].len(), 3);
    assert!(runs[0][0].starts_with("layer,energy,error_vs_exact,per_site_energy"));
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn experiment_subcommands_write_csv_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], &str); 3] = [
        (&["size-consistency", "--n-sub", "2", "--layers", "1"], "size_consistency.csv"),
        (&["barren-plateau", "--n", "3", "--layers", "2", "--samples", "5"], "variance.csv"),
        (&["scaling", "--n", "2,3,4", "--max-layers", "4", "--max-iter", "300"], "scaling.csv"),
    ];
    for (args, file) in cases {
        let out = hea(dir.path(), args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        assert!(text.lines().count() >= 2, "{file}: {text}");
        assert!(dir.path().join(format!("{file}.meta.json")).exists());
    }
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 4] = [
        &["counts", "--ansatz", "nope", "--n", "3", "--layers", "1"],
        &["counts", "--ansatz", "xyz2f", "--n", "0", "--layers", "1"],
        &["compile-pauli", "--pauli", "ZQ", "--n", "2", "--theta", "1"],
        &["ed", "--hamiltonian", "missing.json"],
    ];
    for args in cases {
        let out = hea(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
