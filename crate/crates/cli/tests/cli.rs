use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_quasident"));
    c.env_remove("QUASIDENT_SEED");
    c
}

fn input(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout));
    });
    assert_eq!(v["schema"], "quasident/1");
    (v, out.status.code().unwrap())
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_ch_passes() {
    for n in ["2", "3"] {
        let (v, code) = json(&["verify-ch", "--n", n]);
        assert_eq!(code, 0);
        assert_eq!(v["q_n_vanishes"], true);
        assert_eq!(v["Q_n_vanishes"], true);
    }
    let (v, _) = json(&["verify-ch", "--n", "2"]);
    assert_eq!(v["Q_n"], "x1*x2 + x2*x1 - tr(x1) x2 - tr(x2) x1 + tr(x1) tr(x2) - tr(x1*x2)");
}

#[test]
fn solve_multilinear_n2() {
    let (v, code) = json(&["solve-multilinear", "--n", "2", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["spans_Qn"], true);
    let (v, code) = json(&["solve-multilinear", "--n", "2", "--degree", "1"]);
    assert_eq!((v["dimension"].as_u64(), code), (Some(0), 0));
    assert!(v["spans_Qn"].is_null());
}

#[test]
fn antisym_commands() {
    let (v, code) = json(&["antisym", "kerim", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["ambient"], 7);
    assert_eq!(v["image_rank"], 6);
    assert_eq!(v["ker_rho_equals_image"], true);
    let (v, code) = json(&["antisym", "corollary2", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!((v["fn_dim"].as_u64(), v["ideal_dim"].as_u64()), (Some(7), Some(4)));
    assert_eq!(v["outside_ideal_dim"], 3);
    let (v, code) = json(&["antisym", "dim", "--n", "2"]);
    assert_eq!((v["rank"].as_u64(), code), (Some(8), 0));
}

#[test]
fn check_verdicts() {
    let p1p2 = input(
        "p1p2.txt",
        "(c[2,1,2] x1 - c[1,1,2] x2 + (c[1,1,2] c[2,2,2] - c[1,2,2] c[2,1,2]))\n\
         (c[2,1,2] x1 - c[1,1,2] x2 + (c[1,1,2] c[2,1,1] - c[1,1,1] c[2,1,2]))\n",
    );
    let (v, code) = json(&["check", "--n", "2", "--input", path(&p1p2)]);
    assert_eq!(code, 0);
    assert_eq!(v["quasi_identity"], true);
    assert_eq!(v["evidence"], "symbolic");
    assert_eq!(v["ordinary_identity"], false);

    let sq = input("sq.txt", "(x1*x2 - x2*x1)^2");
    let (v, _) = json(&["check", "--n", "2", "--input", path(&sq)]);
    assert_eq!(v["central"], true);
    assert_eq!(v["quasi_identity"], false);
    assert!(v["nonzero_witness"]["point"]["x1"].is_array());
    let (v, _) = json(&["check", "--n", "3", "--input", path(&sq)]);
    assert_eq!(v["central"], false);
    assert!(v["noncentral_witness"]["value"].is_array());

    let s4 = input("s4.txt", "tr(x1) x1 - c[1,1,1] x1 - c[1,2,2] x1");
    let (v, _) = json(&["check", "--n", "2", "--input", path(&s4)]);
    assert_eq!(v["quasi_identity"], true);
    assert_eq!(v["input"], "0");

    let (v, _) = json(&["check", "--n", "2", "--input", path(&sq), "--mode", "randomized"]);
    assert_eq!(v["evidence"], "randomized");
    assert_eq!(v["central"], true);
    assert!(v["central_test"]["failure_bound"].is_string());
}

#[test]
fn capelli_dependence() {
    let indep = input("indep.txt", "x1\nx2\n");
    let (v, code) = json(&["capelli-dep", "--n", "2", "--input", path(&indep)]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "independent");
    assert_eq!(v["witness"]["kind"], "independent_point");
    let dep = input("dep.txt", "x1\n-3 x1\n");
    let (v, _) = json(&["capelli-dep", "--n", "2", "--input", path(&dep)]);
    assert_eq!(v["verdict"], "dependent");
    assert_eq!(v["confidence"]["kind"], "exact");
}

#[test]
fn errors_are_machine_readable() {
    let bad = input("bad.txt", "x1 +\n  * x2");
    let (v, code) = json(&["check", "--n", "2", "--input", path(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "syntax_error");
    assert_eq!((v["error"]["line"].as_u64(), v["error"]["column"].as_u64()), (Some(2), Some(3)));

    let tr = input("tr.txt", "tr(x1*x2)");
    let (v, code) = json(&["check", "--input", path(&tr)]);
    assert_eq!((v["error"]["kind"].as_str(), code), (Some("dimension_required"), 2));

    let (v, code) = json(&["antisym", "corollary2", "--n", "4"]);
    assert_eq!((v["error"]["kind"].as_str(), code), (Some("budget_exceeded"), 3));
    assert_eq!(v["pass"], false);

    let (v, code) = json(&["verify-ch"]);
    assert_eq!((v["error"]["kind"].as_str(), code), (Some("usage"), 2));
    let (_, code) = json(&["verify-ch", "--n", "2", "--bound", "0"]);
    assert_eq!(code, 2);
    let (v, code) = json(&["no-such-command"]);
    assert_eq!((v["error"]["kind"].as_str(), code), (Some("usage"), 2));
}

#[test]
fn output_is_deterministic_and_seeded() {
    let sq = input("det.txt", "(x1*x2 - x2*x1)^2 + x1");
    let args = ["check", "--n", "2", "--input", path(&sq), "--mode", "randomized", "--format", "json", "--seed", "3"];
    let a = run(&args).stdout;
    assert_eq!(a, run(&args).stdout);
    let with_env = bin().args(args).env("QUASIDENT_SEED", "11").output().unwrap();
    let v: Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 11);
    assert_ne!(a, with_env.stdout);
    let (v, _) = json(&["verify-ch", "--n", "2", "--timings"]);
    assert!(v["runtime_ms"].is_number());
    let (v, _) = json(&["verify-ch", "--n", "2"]);
    assert!(v.get("runtime_ms").is_none());
}

#[test]
fn text_format() {
    let out = run(&["solve-multilinear", "--n", "2", "--degree", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass: true\n"), "{text}");
    assert!(text.contains("dimension: 1\n"));
    assert!(text.contains("command: solve-multilinear\n"));
}
