//! End-to-end tests of the binary: pipelines, output determinism, and exit
//! codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qbflab")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn qbflab")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn qbflab")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qbflab-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_prove_check_scc_pipeline() {
    let dir = tempdir("pipeline");
    let out = run_in(&dir, &["gen", "eq", "-n", "2", "-o", "eq2.qdimacs"]);
    assert!(out.status.success(), "gen failed: {out:?}");

    let out = run_in(
        &dir,
        &[
            "prove",
            "qures",
            "--formula",
            "eq2.qdimacs",
            "-o",
            "eq2.qrp",
        ],
    );
    assert!(out.status.success(), "prove failed: {out:?}");

    let out = run_in(
        &dir,
        &[
            "check",
            "qures",
            "--formula",
            "eq2.qdimacs",
            "--proof",
            "eq2.qrp",
        ],
    );
    assert!(out.status.success(), "check failed: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("accepted"));

    let out = run_in(
        &dir,
        &[
            "scc",
            "qures",
            "--formula",
            "eq2.qdimacs",
            "--proof",
            "eq2.qrp",
        ],
    );
    assert!(out.status.success(), "scc failed: {out:?}");
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("scc report is JSON");
    assert_eq!(report["cost"], 4);
    assert_eq!(report["capacity"], 1);
    assert_eq!(report["holds"], true);

    let out = run_in(
        &dir,
        &[
            "extract",
            "qures",
            "--formula",
            "eq2.qdimacs",
            "--proof",
            "eq2.qrp",
        ],
    );
    assert!(out.status.success(), "extract failed: {out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["winning"], true);
}

#[test]
fn tampered_trace_rejected_with_step_id() {
    let dir = tempdir("tamper");
    run_in(&dir, &["gen", "eq", "-n", "1", "-o", "eq1.qdimacs"]);
    run_in(
        &dir,
        &[
            "prove",
            "qures",
            "--formula",
            "eq1.qdimacs",
            "-o",
            "eq1.qrp",
        ],
    );
    // inject a tautological weakening target
    let trace = std::fs::read_to_string(dir.join("eq1.qrp")).unwrap();
    let last_id: u64 = trace
        .lines()
        .last()
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    // a tautological weakening of step 1: parses, fails the checker
    let tampered = format!("{trace}{} 1 -1 2 -3 0 1 0\n", last_id + 1);
    std::fs::write(dir.join("bad.qrp"), tampered).unwrap();
    let out = run_in(
        &dir,
        &[
            "check",
            "qures",
            "--formula",
            "eq1.qdimacs",
            "--proof",
            "bad.qrp",
        ],
    );
    assert_eq!(out.status.code(), Some(1), "tampered proof must exit 1");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "rejected");
    assert_eq!(report["step"], last_id + 1);
}

#[test]
fn usage_and_cap_exit_codes() {
    // unknown subcommand: clap exits 2
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // oracle cap exceeded: exit 3
    let dir = tempdir("caps");
    run_in(&dir, &["gen", "eq", "-n", "2", "-o", "eq2.qdimacs"]);
    let out = run_in(
        &dir,
        &["truth", "--formula", "eq2.qdimacs", "--var-cap", "3"],
    );
    assert_eq!(out.status.code(), Some(3), "cap error must exit 3: {out:?}");

    // malformed formula: exit 2
    std::fs::write(dir.join("bad.qdimacs"), "p cnf 2 1\ne 1 2 0\n3 0\n").unwrap();
    let out = run_in(&dir, &["truth", "--formula", "bad.qdimacs"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_study_is_deterministic() {
    let args = [
        "random-study",
        "--n",
        "6",
        "--m",
        "1",
        "--cn",
        "9",
        "--trials",
        "12",
        "--seed",
        "1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    // runtimes fluctuate: compare all but the runtime column
    let strip = |raw: &[u8]| -> Vec<String> {
        String::from_utf8_lossy(raw)
            .lines()
            .map(|l| {
                l.rsplit_once(',')
                    .map(|(head, _)| head.to_string())
                    .unwrap_or_default()
            })
            .collect()
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
    let text = String::from_utf8_lossy(&a.stdout).to_string();
    assert_eq!(text.lines().count(), 13, "header plus 12 rows");
    assert!(text.starts_with("trial,seed,n,m,cn,"));
}

#[test]
fn gen_outputs_reproducible_and_reparseable() {
    let args = [
        "gen", "randq", "--n", "4", "--m", "1", "--cn", "6", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempdir("reparse");
    let out = run_in(
        &dir,
        &[
            "gen",
            "randq",
            "--n",
            "4",
            "--m",
            "1",
            "--cn",
            "6",
            "--seed",
            "7",
            "-o",
            "q.qdimacs",
            "--meta",
            "q.meta.json",
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.join("q.qdimacs")).unwrap();
    qbflab::qdimacs::parse(&text).expect("generated file reparses");
    let meta: qbflab::gen::RandomQMeta =
        serde_json::from_str(&std::fs::read_to_string(dir.join("q.meta.json")).unwrap()).unwrap();
    assert_eq!(meta.components.len(), 4);
}

#[test]
fn sigma2_prove_on_component() {
    // build a false component, write it, refute it via the 2-SAT route
    let dir = tempdir("sigma2");
    let mut found = false;
    for seed in 0..50u64 {
        let (_, meta) = qbflab::gen::random_q(6, 1, 9, seed).unwrap();
        for comp in &meta.components {
            let psi = comp.psi().unwrap();
            if qbflab::oracle::psi_false(&psi).unwrap() {
                std::fs::write(dir.join("psi.qdimacs"), qbflab::qdimacs::write(&psi)).unwrap();
                found = true;
                break;
            }
        }
        if found {
            break;
        }
    }
    assert!(found);
    let out = run_in(
        &dir,
        &[
            "prove",
            "qures",
            "--formula",
            "psi.qdimacs",
            "--mode",
            "sigma2",
            "-o",
            "psi.qrp",
        ],
    );
    assert!(out.status.success(), "sigma2 prove failed: {out:?}");
    let out = run_in(
        &dir,
        &[
            "check",
            "qures",
            "--formula",
            "psi.qdimacs",
            "--proof",
            "psi.qrp",
        ],
    );
    assert!(out.status.success());
}

#[test]
fn truth_on_true_formula_and_unrefutable() {
    let dir = tempdir("true");
    // ∀u ∃t · (u ∨ t)(¬u ∨ t) is true
    std::fs::write(
        dir.join("t.qdimacs"),
        "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 2 0\n",
    )
    .unwrap();
    let out = run_in(&dir, &["truth", "--formula", "t.qdimacs"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("true"));
    let out = run_in(&dir, &["prove", "qures", "--formula", "t.qdimacs"]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "no refutation of a true formula"
    );
}
