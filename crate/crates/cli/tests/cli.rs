use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semibrick"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
    (out.status.code().unwrap(), v)
}

#[test]
fn brick_example() {
    let (code, v) = run_json(&[
        "brick",
        "--quiver",
        &fixture("k2.q"),
        "--module",
        &fixture("r1.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["is_brick"], true);
    assert_eq!(v["end_dim"], 1);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn extend_is_reproducible() {
    let args = [
        "extend",
        "--quiver",
        &fixture("k2.q"),
        "--semibrick",
        &fixture("r1.json"),
        "--seed",
        "7",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["certificate"]["l"], 1);
    assert_eq!(v["certificate"]["checks"]["end_dim"], 1);
}

#[test]
fn selftest_passes_and_is_byte_identical() {
    let a = run(&["selftest", "--seed", "3", "--json"]);
    let b = run(&["selftest", "--seed", "3", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn every_subcommand_reports_schema_version() {
    let k2 = fixture("k2.q");
    let a2 = fixture("a2.q");
    let r1 = fixture("r1.json");
    let r2 = fixture("r2.json");
    let s1 = fixture("s1.json");
    let s2 = fixture("s2.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["hom", "--module", &r1, "--module", &r2],
        vec!["ext", "--module", &r1, "--module", &r1],
        vec!["brick", "--module", &r1],
        vec!["semibrick", "--module", &r1, "--module", &r2],
        vec!["iso", "--module", &r1, "--module", &r1],
        vec!["open", "--module", &r1],
        vec!["schur", "--quiver", &k2, "--dim", "1,2"],
        vec!["classify", "--quiver", &k2, "--dim", "1,1"],
        vec!["candecomp", "--quiver", &k2, "--dim", "2,2"],
        vec!["decompose", "--quiver", &a2, "--module", &s1],
        vec!["theta", "--module", &s2, "--theta", "1,-1"],
        vec!["present", "--quiver", &k2, "--theta", "1,-1"],
        vec!["fbar", "--module", &r1, "--theta", "1,-1"],
        vec!["fei", "--quiver", &k2, "--module", &r1, "--theta", "1,-1"],
        vec!["extend", "--semibrick", &r1],
        vec!["grow", "--semibrick", &r1, "--target", "3"],
        vec!["probe", "--semibrick", &r1, "--dim", "1,1"],
        vec![
            "generic-hom",
            "--quiver",
            &k2,
            "--dim",
            "1,1",
            "--dim",
            "1,1",
        ],
    ];
    for args in cases {
        let (code, v) = run_json(&args);
        assert!(code <= 1, "{args:?} exited {code}");
        assert_eq!(v["schema_version"], 1, "{args:?}");
        assert_eq!(v["p"], 2147483647u64, "{args:?}");
        assert!(v.get("seed").is_some(), "{args:?}");
    }
}

#[test]
fn verdict_exit_codes() {
    let k2 = fixture("k2.q");
    assert_eq!(
        run(&["schur", "--quiver", &k2, "--dim", "2,2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["schur", "--quiver", &k2, "--dim", "1,2"])
            .status
            .code(),
        Some(0)
    );
    let (code, v) = run_json(&[
        "semibrick",
        "--module",
        &fixture("r1.json"),
        "--module",
        &fixture("r1.json"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["is_semibrick"], false);
    let (code, v) = run_json(&["probe", "--semibrick", &fixture("r1.json"), "--dim", "1,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "not-maximal");
    let (code, v) = run_json(&[
        "probe",
        "--semibrick",
        &fixture("s1.json"),
        &fixture("s2.json"),
        "--dim",
        "1,0",
        "--dim",
        "0,1",
        "--dim",
        "1,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["members_open"], serde_json::json!([true, true]));
}

#[test]
fn exhausted_budget_exits_3() {
    let (code, v) = run_json(&[
        "extend",
        "--semibrick",
        &fixture("a1_s1.json"),
        "--lmax",
        "2",
        "--trials",
        "5",
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "exhausted");
    assert_eq!(
        v["warning"],
        "theorem hypothesis unmet — extension not guaranteed"
    );
    let (code, v) = run_json(&[
        "grow",
        "--semibrick",
        &fixture("p1.json"),
        "--target",
        "2",
        "--lmax",
        "2",
        "--trials",
        "5",
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["partial"], true);
    assert_eq!(v["size"], 1);
}

#[test]
fn input_errors_name_file_and_line() {
    let dir = std::env::temp_dir().join(format!("semibrick-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = dir.join("bad.q");
    std::fs::write(&q, "vertices: 1 2\narrow a: 1 -> 2\narrow b 1 -> 2\n").unwrap();
    let out = run(&["schur", "--quiver", q.to_str().unwrap(), "--dim", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.q") && err.contains("line 3"), "{err}");

    let m = dir.join("bad.json");
    std::fs::write(&m, "{\n  \"quiver\": \"K2\",\n  \"p\": 7,\n  \"dim\": {\"1\": 1, \"2\": 1}\n  \"mats\": {}\n}\n").unwrap();
    let out = run(&["brick", "--module", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.json") && err.contains("line 5"), "{err}");

    let out = run(&[
        "brick",
        "--module",
        dir.join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["brick"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "fei",
            "--quiver",
            &fixture("k2.q"),
            "--module",
            &fixture("r1.json"),
            "--theta",
            "1,-1",
            "--trials",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["schur", "--quiver", &fixture("loop.q"), "--dim", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["brick", "--module", &fixture("r1.json"), "--prime", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn grown_semibrick_feeds_back_in() {
    let out = run(&[
        "grow",
        "--semibrick",
        &fixture("r1.json"),
        "--target",
        "4",
        "--seed",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 4);
    let path = std::env::temp_dir().join(format!("semibrick-grow-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&v["members"]).unwrap()).unwrap();
    let (code, check) = run_json(&["semibrick", "--semibrick", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    assert_eq!(check["size"], 4);
}

#[test]
fn human_output_is_a_table() {
    let out = run(&[
        "hom",
        "--module",
        &fixture("r1.json"),
        "--module",
        &fixture("r1.json"),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("hom_dim") && l.trim_end().ends_with('1')),
        "{text}"
    );
    assert!(!text.contains("schema_version"));
}
