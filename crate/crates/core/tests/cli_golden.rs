//! Byte-for-byte CLI reports. Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn lowarea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowarea"))
        .args(args)
        .current_dir(manifest_dir())
        .env_remove("FLOER_LEDGER_PATH")
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = lowarea(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{name}: stderr {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = manifest_dir().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert!(
        out.stdout == expected,
        "{name} differs from golden:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

fn results(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stdout).expect("JSON report")["results"].clone()
}

#[test]
fn criterion_cp2() {
    golden(
        "criterion_cp2.json",
        &[
            "criterion",
            "--builtin",
            "cp2_ta:a=1/10",
            "--vs",
            "cp2_clifford",
            "--ring",
            "Z/8",
        ],
        0,
    );
    let r = results(&lowarea(&[
        "criterion",
        "--builtin",
        "cp2_ta:a=1/10",
        "--vs",
        "cp2_clifford",
        "--ring",
        "Z/8",
    ]));
    assert_eq!(r["verdict"]["conclusion"], "non_displaceable");
    assert_eq!(r["verdict"]["pairing"], "4");
}

#[test]
fn sweep_cp2() {
    let args = [
        "sweep",
        "--builtin",
        "cp2_ta",
        "--vs",
        "cp2_clifford",
        "--ring",
        "Z/8",
        "--param",
        "a",
        "--from",
        "1/100",
        "--to",
        "1/5",
        "--step",
        "1/100",
    ];
    golden("sweep_cp2.json", &args, 0);
    let r = results(&lowarea(&args));
    for p in r["points"].as_array().unwrap() {
        let v = p["value"].as_str().unwrap();
        let a = lowarea::ring::parse_rational(v).unwrap();
        let expected = if a < lowarea::ring::q(1, 9) {
            "non_displaceable"
        } else {
            "inconclusive"
        };
        assert_eq!(p["verdict"]["conclusion"], expected, "a = {v}");
    }
    assert_eq!(r["thresholds"][0]["exact"], "1/9");
    assert_eq!(r["thresholds"][0]["verified"], true);
}

#[test]
fn validate_bad_fixture() {
    golden("validate_bad.json", &["validate", "tests/fixtures/bad.json"], 3);
    let r = results(&lowarea(&["validate", "tests/fixtures/bad.json"]));
    assert_eq!(r["error"]["invariant"], "exactness");
}

#[test]
fn other_commands() {
    golden("builtin_list.json", &["builtin-list"], 0);
    golden(
        "validate_fixture.txt",
        &["validate", "tests/fixtures/cp2_ta.json", "--format", "text"],
        0,
    );
    golden(
        "invariant_quadric.json",
        &[
            "invariant",
            "--builtin",
            "p1xp1_ta:a=1/5",
            "--vs",
            "p1xp1_clifford",
            "--ring",
            "Z/2",
            "--subspaces",
            "--field",
            "F2",
        ],
        0,
    );
    golden(
        "potential_cp2.json",
        &[
            "potential",
            "--builtin",
            "cp2_ta:a=1/5",
            "--bulk",
            "beta=1",
            "--analyze-units",
        ],
        0,
    );
    golden(
        "probes_quadric.json",
        &["probes", "tests/fixtures/quadric.json", "--point", "0,3/4"],
        0,
    );
}

#[test]
fn exit_codes() {
    assert_eq!(lowarea(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        lowarea(&["criterion", "--builtin", "cp2_ta:a=2"]).status.code(),
        Some(2)
    );
    assert_eq!(lowarea(&["criterion", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(lowarea(&["probes", "--point", "0.5,1/2"]).status.code(), Some(2));
    // Subspaces need both Q and k.
    assert_eq!(
        lowarea(&[
            "criterion",
            "--builtin",
            "cp2_ta:a=1/10",
            "--subspaces",
            "--ring",
            "Z/2"
        ])
        .status
        .code(),
        Some(2)
    );
    // One side only: a computation error.
    assert_eq!(
        lowarea(&["criterion", "--builtin", "cp2_ta:a=1/10"]).status.code(),
        Some(4)
    );
    assert_eq!(lowarea(&["--version"]).status.code(), Some(0));
}

#[test]
fn text_and_json_share_the_payload() {
    let base = [
        "criterion",
        "--builtin",
        "cp2_ta:a=1/5",
        "--vs",
        "cp2_clifford",
        "--ring",
        "Z/8",
    ];
    let json_out = lowarea(&base);
    let mut text_args = base.to_vec();
    text_args.extend(["--format", "text"]);
    let text_out = lowarea(&text_args);
    let mut doc: Value = serde_json::from_slice(&json_out.stdout).unwrap();
    doc["command"] = text_args.iter().map(|s| Value::from(*s)).collect();
    assert_eq!(
        lowarea::report::render_text(&doc).as_bytes(),
        text_out.stdout.as_slice()
    );
}

#[test]
fn reports_are_deterministic() {
    let args = ["probes", "--default", "cp2", "--point", "1/4,3/8", "--bound", "4"];
    assert_eq!(lowarea(&args).stdout, lowarea(&args).stdout);
}

#[test]
fn search_path_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lowarea"))
        .args(["validate", "cp2_ta.json"])
        .current_dir(std::env::temp_dir())
        .env("FLOER_LEDGER_PATH", manifest_dir().join("tests/fixtures"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(Path::new(&manifest_dir().join("tests/fixtures/cp2_ta.json")).exists());
}
