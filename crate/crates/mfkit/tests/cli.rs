//! End-to-end runs of the `mfkit` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mfkit::cover::CoverModule;
use mfkit::report::{Report, Status};
use tempfile::TempDir;

fn mfkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfkit"))
        .args(args)
        .output()
        .expect("run mfkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn emit(dir: &TempDir, entry: &str) -> PathBuf {
    let o = mfkit(&["corpus", "emit", entry]);
    assert!(o.status.success());
    write(dir, &entry.replace('/', "_"), &stdout(&o))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_x_beta_passes() {
    let dir = TempDir::new().unwrap();
    let x = emit(&dir, "e6/X_beta");
    let o = mfkit(&["verify", "--file", s(&x)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("product = f·I: PASS"), "{}", stdout(&o));
    assert_eq!(mfkit(&["verify", s(&x)]).status.code(), Some(0));
}

#[test]
fn wrong_product_fails_with_position() {
    let dir = TempDir::new().unwrap();
    // (y^3, y, y) multiplies to y^5, not y^4
    let text = stdout(&mfkit(&["corpus", "emit", "e6/X_beta"])).replacen("[1,[2]]", "[1,[3]]", 1);
    let x = write(&dir, "bad", &text);
    let o = mfkit(&["verify", s(&x)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("product = f·I: FAIL"), "{out}");
    assert!(out.contains("entry (0, 0)"), "{out}");
}

#[test]
fn header_disagreeing_with_flag_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let x = emit(&dir, "e6/X_beta");
    let o = mfkit(&["--field-char", "13", "verify", s(&x)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("disagrees"));
    assert_eq!(mfkit(&["--field-char", "7", "verify", s(&x)]).status.code(), Some(0));
}

#[test]
fn save_load_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    for (entry, d) in [("e6/X_alpha", "3"), ("dinfty/X_3", "3"), ("ulrich/a4/mf", "4")] {
        let original = stdout(&mfkit(&["corpus", "emit", entry]));
        let path = write(&dir, "obj", &original);
        assert_eq!(stdout(&mfkit(&["shift", s(&path), "-k", "0"])), original, "{entry}");
        // T^d X = X and T^-1 T X = X
        assert_eq!(stdout(&mfkit(&["shift", s(&path), "-k", d])), original, "{entry}");
        let t = write(&dir, "t", &stdout(&mfkit(&["shift", s(&path)])));
        assert_eq!(stdout(&mfkit(&["shift", s(&t), "-k", "-1"])), original, "{entry}");
    }
    for entry in ["e6/M1", "e6_d4/B"] {
        let original = stdout(&mfkit(&["corpus", "emit", entry]));
        assert_eq!(
            CoverModule::from_json(&original).unwrap().to_json(),
            original,
            "{entry}"
        );
    }
}

#[test]
fn flat_of_m1_decomposes() {
    let dir = TempDir::new().unwrap();
    let m1 = emit(&dir, "e6/M1");
    let flat = write(&dir, "flat", &stdout(&mfkit(&["flat", s(&m1)])));
    let o = mfkit(&["--truncation", "8", "decompose", s(&flat), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.settings.truncation, Some(8));
    assert!(r.results[0].detail.contains("3 summands"));
    assert!(r.recheck().failures.is_empty());
}

#[test]
fn isom_and_order() {
    let dir = TempDir::new().unwrap();
    let x = emit(&dir, "e6/X_phi1");
    let tx = write(&dir, "tx", &stdout(&mfkit(&["shift", s(&x)])));
    let t3x = write(&dir, "t3x", &stdout(&mfkit(&["shift", s(&x), "-k", "3"])));
    assert_eq!(mfkit(&["isom", s(&x), s(&t3x)]).status.code(), Some(0));
    let o = mfkit(&["isom", s(&x), s(&tx)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NotIsoModN"));
    let o = mfkit(&["order", s(&x)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order = 3"), "{}", stdout(&o));
}

#[test]
fn sharp_output_is_a_valid_module() {
    let dir = TempDir::new().unwrap();
    let x = emit(&dir, "e6/X_xi");
    let m = write(&dir, "m", &stdout(&mfkit(&["sharp", s(&x)])));
    let o = mfkit(&["verify", s(&m)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("phi^d = -f·I: PASS"));
    // a module where a factorization is expected
    assert_eq!(mfkit(&["sharp", s(&m)]).status.code(), Some(2));
}

#[test]
fn classify_verdicts() {
    assert_eq!(stdout(&mfkit(&["classify", "--e", "3", "--d", "6"])), "Infinite\n");
    assert_eq!(
        stdout(&mfkit(&["classify", "--e", "5", "--d", "3"])),
        "Finite (A_4 row)\n"
    );
}

#[test]
fn corpus_report_rechecks_from_file() {
    let dir = TempDir::new().unwrap();
    let o = mfkit(&["corpus", "check", "--entry", "e6/M1_flat", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let path = write(&dir, "report", &stdout(&o));
    let o = mfkit(&["recheck", s(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("every certificate verifies exactly: PASS"));
}

#[test]
fn tampered_certificate_fails_recheck() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&mfkit(&["corpus", "check", "--entry", "e6/X_beta", "--format", "json"]));
    let mut report = Report::from_json(&text).unwrap();
    let cert = report
        .certificates
        .iter_mut()
        .find(|c| !c.maps.is_empty())
        .expect("a certificate with maps");
    cert.maps[0] = cert.maps[1].clone();
    let path = write(&dir, "tampered", &report.to_json());
    assert_eq!(mfkit(&["recheck", s(&path)]).status.code(), Some(1));
}

#[test]
fn other_seed_keeps_verdicts() {
    let verdicts = |seed: &str| {
        let o = mfkit(&["corpus", "check", "--seed", seed, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let r = Report::from_json(&stdout(&o)).unwrap();
        assert!(r.results.iter().all(|l| l.status == Status::Pass));
        r.results
            .into_iter()
            .map(|l| (l.subject, l.assertion))
            .collect::<Vec<_>>()
    };
    assert_eq!(verdicts("0"), verdicts("7"));
}

#[test]
fn moore_scan_reports_the_prime() {
    let o = mfkit(&["moore", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.settings.p, Some(109));
    assert_eq!(r.results.len(), 99);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mfkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mfkit(&["verify"]).status.code(), Some(2));
    assert_eq!(mfkit(&["verify", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(mfkit(&["corpus", "check", "--entry", "nope"]).status.code(), Some(2));
}
