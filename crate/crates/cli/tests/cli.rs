use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infoex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

/// Header plus numeric columns by name.
fn table(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| {
            rec.unwrap()
                .iter()
                .map(|x| match x {
                    "true" => 1.0,
                    "false" => 0.0,
                    _ => x.parse().unwrap(),
                })
                .collect()
        })
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let k = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k]).collect()
}

#[test]
fn bound_report_for_complete_qubit_bases() {
    let v = json(&["ier", "bound", "--ensemble", &fixture("cmub_d2.json")]);
    assert!((f(&v["norm"]) - 1.0 / 3.0).abs() < 1e-12);
    assert!((f(&v["exclusivity"]) - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["informationally_complete"], Value::Bool(true));
    assert_eq!(v["complementary_pairs"].as_array().unwrap().len(), 3);
    assert_eq!(v["seed"], 0);
    assert!((f(&v["tolerances"]["state"]) - 1e-9).abs() < 1e-24);
}

#[test]
fn bound_report_for_two_bases() {
    let v = json(&["ier", "bound", "--input", &fixture("two_mub_d2.json")]);
    assert!((f(&v["norm"]) - 0.5).abs() < 1e-12);
    assert_eq!(v["informationally_complete"], Value::Bool(false));
}

#[test]
fn malformed_effect_is_a_validation_error() {
    let out = run(&["ier", "bound", "--ensemble", &fixture("bad_effect_d2.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("eigenvalue") && err.contains("effect 1"),
        "{err}"
    );
}

#[test]
fn check_saturates_and_vanishes() {
    let v = json(&[
        "ier",
        "check",
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--state",
        &fixture("tilted_d2.json"),
    ]);
    assert!(f(&v["audit"]["slack"]).abs() < 1e-10);

    let v = json(&[
        "ier",
        "check",
        "--ensemble",
        &fixture("shared_basis_d2.json"),
        "--state",
        &fixture("zero_d2.json"),
    ]);
    assert!(f(&v["audit"]["slack"]).abs() < 1e-12);
    assert!((f(&v["audit"]["norm"]) - 1.0).abs() < 1e-12);

    let v = json(&[
        "ier",
        "check",
        "--ensemble",
        &fixture("two_mub_d2.json"),
        "--state",
        &fixture("maximally_mixed_d2.json"),
    ]);
    assert!(f(&v["audit"]["lhs"]).abs() < 1e-15);
}

#[test]
fn check_with_memory() {
    let v = json(&[
        "ier",
        "check",
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--state",
        &fixture("bell.json"),
    ]);
    let m = &v["memory"];
    assert!((f(&m["conditional_entropy"]) + 1.0).abs() < 1e-12);
    assert!(f(&m["entropy_bound"]["slack"]).abs() < 1e-9);
    assert!(f(&m["min_entropy"]["slack"]) >= -1e-9);

    let v = json(&[
        "ier",
        "check",
        "--ensemble",
        &fixture("two_mub_d2.json"),
        "--state",
        &fixture("noisy_entangled.json"),
        "--epsilon",
        "0.5",
    ]);
    assert!(f(&v["memory"]["entropy_bound"]["slack"]) >= -1e-9);
    assert!((f(&v["memory"]["min_entropy"]["epsilon"]) - 0.5).abs() < 1e-15);
}

#[test]
fn check_dimension_mismatch() {
    let out = run(&[
        "ier",
        "check",
        "--ensemble",
        &fixture("cmub_d3.json"),
        "--state",
        &fixture("tilted_d2.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tomography_roundtrip_qutrit() {
    let dir = tempfile::tempdir().unwrap();
    let probs = dir.path().join("p.json");
    let probs = probs.to_str().unwrap();
    ok(&[
        "tomo",
        "simulate",
        "--ensemble",
        &fixture("cmub_d3.json"),
        "--state",
        &fixture("mixed_d3.json"),
        "--out",
        probs,
    ]);
    let v = json(&[
        "tomo",
        "reconstruct",
        "--ensemble",
        &fixture("cmub_d3.json"),
        "--input",
        probs,
        "--state",
        &fixture("mixed_d3.json"),
    ]);
    assert!(f(&v["error_raw"]) <= 1e-8);
    assert!(f(&v["residual"]) <= 1e-10);
}

#[test]
fn sampled_tomography_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        ok(&[
            "tomo",
            "simulate",
            "--ensemble",
            &fixture("cmub_d2.json"),
            "--state",
            &fixture("tilted_d2.json"),
            "--shots",
            "100000",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v = json(&[
        "tomo",
        "reconstruct",
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--input",
        a.to_str().unwrap(),
        "--state",
        &fixture("tilted_d2.json"),
    ]);
    let err = f(&v["error_projected"]);
    eprintln!("1e5 shots: Frobenius error {err:.3e}");
    assert!(err < 0.05);
}

#[test]
fn incomplete_tomography_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let probs = dir.path().join("p.json");
    let probs = probs.to_str().unwrap();
    ok(&[
        "tomo",
        "simulate",
        "--ensemble",
        &fixture("single_basis_d2.json"),
        "--state",
        &fixture("zero_d2.json"),
        "--out",
        probs,
    ]);
    let out = run(&[
        "tomo",
        "reconstruct",
        "--ensemble",
        &fixture("single_basis_d2.json"),
        "--input",
        probs,
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn eta_scan_case_a_matches_ppt_boundary() {
    let (h, rows) = table(&ok(&["witness", "eta-scan", "--case", "a"]));
    assert_eq!(
        h,
        [
            "beta",
            "eta_star",
            "eta_equ",
            "eta_opt",
            "J_at_eta1",
            "bound"
        ]
    );
    assert_eq!(rows.len(), 65);
    let star = column(&h, &rows, "eta_star");
    let equ = column(&h, &rows, "eta_equ");
    for (s, e) in star.iter().zip(&equ) {
        assert!((s - e).abs() < 1e-6);
    }
}

#[test]
fn eta_scan_case_d_is_weaker() {
    let (h, rows) = table(&ok(&["witness", "eta-scan", "--case", "d", "--grid", "9"]));
    let beta = column(&h, &rows, "beta");
    let k = beta
        .iter()
        .position(|b| (b - FRAC_PI_4).abs() < 1e-12)
        .unwrap();
    assert!(column(&h, &rows, "eta_equ")[k] > column(&h, &rows, "eta_star")[k] + 0.1);
}

#[test]
fn optimize_never_worse_than_equal_weights() {
    let (h, rows) = table(&ok(&["witness", "optimize", "--case", "b", "--grid", "9"]));
    let opt = column(&h, &rows, "eta_opt");
    let equ = column(&h, &rows, "eta_equ");
    assert!(opt.iter().zip(&equ).all(|(o, e)| *o <= e + 1e-9));
    assert!(opt.iter().zip(&equ).any(|(o, e)| *o < e - 1e-6));
    assert!(h.contains(&"w_2".to_string()));
}

#[test]
fn witness_file_matches_builtin_case() {
    let builtin = ok(&["witness", "eta-scan", "--case", "c", "--grid", "5"]);
    let from_file = ok(&[
        "witness",
        "eta-scan",
        "--input",
        &fixture("witness_case_c.json"),
        "--grid",
        "5",
    ]);
    let (h, a) = table(&builtin);
    let (_, b) = table(&from_file);
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() < 1e-9, "{h:?}\n{ra:?}\n{rb:?}");
        }
    }
    assert_eq!(
        builtin,
        ok(&["witness", "eta-scan", "--case", "c", "--grid", "5"])
    );
}

#[test]
fn invalid_case_label() {
    let out = run(&["witness", "eta-scan", "--case", "e"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_rows_for_scans() {
    let v = json(&[
        "witness", "eta-scan", "--case", "a", "--grid", "3", "--format", "json", "--seed", "5",
    ]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["seed"], 5);
    assert!(v["rows"][0]["J_at_eta1"].is_number());
}

#[test]
fn mzi_fringes() {
    let (h, rows) = table(&ok(&["mzi", "scan", "--bs2", "on", "--grid", "64"]));
    let phi = column(&h, &rows, "phi");
    let p0 = column(&h, &rows, "p_d0");
    for (x, p) in phi.iter().zip(&p0) {
        assert!((p - (1.0 + x.cos()) / 2.0).abs() < 1e-12);
    }
    let (h, rows) = table(&ok(&[
        "mzi",
        "scan",
        "--alpha",
        "0.7853981633974483",
        "--grid",
        "8",
    ]));
    assert!(column(&h, &rows, "wpdr_residual")
        .iter()
        .all(|r| *r < 1e-10));
}

#[test]
fn mzi_without_second_splitter() {
    let (h, rows) = table(&ok(&[
        "mzi",
        "scan",
        "--alpha",
        "0.3",
        "--bs2",
        "off",
        "--state",
        &fixture("tilted_d2.json"),
    ]));
    for name in ["p_d0", "p_d1"] {
        let col = column(&h, &rows, name);
        assert!(col.iter().all(|x| *x == col[0]));
    }
}

#[test]
fn mzi_rejects_qutrits() {
    let out = run(&["mzi", "scan", "--state", &fixture("mixed_d3.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guessing_game_on_bell_state() {
    let out = ok(&[
        "guess-game",
        "run",
        "--state",
        &fixture("bell.json"),
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--steps",
        "50",
        "--seed",
        "3",
    ]);
    let (h, rows) = table(&out);
    assert_eq!(rows.len(), 51);
    assert!(column(&h, &rows, "entropy_sum")
        .iter()
        .all(|x| x.abs() < 1e-9));
    assert_eq!(
        out,
        ok(&[
            "guess-game",
            "run",
            "--state",
            &fixture("bell.json"),
            "--ensemble",
            &fixture("cmub_d2.json"),
            "--steps",
            "50",
            "--seed",
            "3"
        ])
    );
}

#[test]
fn guessing_game_invariance_on_mixed_state() {
    let (h, rows) = table(&ok(&[
        "guess-game",
        "run",
        "--state",
        &fixture("noisy_entangled.json"),
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--steps",
        "20",
    ]));
    let s = column(&h, &rows, "entropy_sum");
    assert!(s.iter().all(|x| (x - s[0]).abs() < 1e-9));
    assert!(column(&h, &rows, "slack").iter().all(|x| *x >= -1e-9));
}

#[test]
fn out_flag_and_bad_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.json");
    let stdout = ok(&[
        "ier",
        "bound",
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((f(&v["norm"]) - 1.0 / 3.0).abs() < 1e-12);

    let out = run(&[
        "ier",
        "bound",
        "--ensemble",
        &fixture("cmub_d2.json"),
        "--tolerance",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["ier", "bound", "--ensemble", &fixture("missing.json")]);
    assert_eq!(out.status.code(), Some(2));
}
