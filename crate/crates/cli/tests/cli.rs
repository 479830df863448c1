use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn input(module: &str, name: &str) -> String {
    fixtures().join(module).join("inputs").join(name).display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn doc(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn bighom_with(args: &[&str], stdin: Option<&str>, env: &[(&str, &Path)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bighom"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn bighom(args: &[&str]) -> Run {
    bighom_with(args, None, &[])
}

#[test]
fn unknown_continuum_comparison_is_a_refusal() {
    let r = bighom(&["cardinal", "compare", "pow(aleph(0))", "aleph(1)", "--mode", "zfc"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.doc()["verdict"], "UNKNOWN");
    let r = bighom(&["cardinal", "compare", "pow(aleph(0))", "aleph(1)", "--mode", "gch"]);
    assert_eq!((r.code, r.doc()["verdict"].clone()), (0, json!("EQ")));
}

#[test]
fn two_chain_embeds_at_half_and_three_quarters() {
    let r = bighom(&["embed", "--dims", "1", "--grid", "exact", "--order", "-"]);
    assert_eq!(r.code, 1, "empty stdin is malformed");
    let r = bighom_with(
        &["embed", "--dims", "1", "--grid", "exact", "--order", "-"],
        Some(r#"{"labels":["a","b"]}"#),
        &[],
    );
    assert_eq!(r.code, 0);
    assert_eq!(r.doc(), json!({"labels": ["a", "b"], "points": [["1/2"], ["3/4"]]}));
}

#[test]
fn malformed_json_is_a_validation_error() {
    let r = bighom_with(&["finspace", "classes", "-"], Some(r#"{"points":["a"],"#), &[]);
    assert_eq!(r.code, 1);
    assert!(r.doc()["error"].as_str().unwrap().contains("EOF"));
    assert!(r.stderr.starts_with("error:"));
    let r = bighom_with(
        &["finspace", "classes", "-"],
        Some(r#"{"points":["a"],"min_nbhd":{"a":["b"]}}"#),
        &[],
    );
    assert_eq!(r.code, 1);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(bighom(&["embed", "--dims", "x"]).code, 1);
    assert_eq!(bighom(&["nonsense"]).code, 1);
    assert_eq!(bighom(&["orders", "duality", "f.json"]).code, 1);
    let help = bighom(&["--help"]);
    assert_eq!(help.code, 0);
    for sub in [
        "cardinal", "orders", "lexint", "embed", "quotient", "finspace", "bigmaps", "selftest",
    ] {
        assert!(help.stdout.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn capacity_refusal_names_the_element() {
    let r = bighom(&[
        "embed",
        "--dims",
        "1",
        "--grid",
        "dyadic:1",
        "--order",
        &input("embed", "chain3.json"),
    ]);
    assert_eq!(r.code, 2);
    let d = r.doc();
    assert_eq!(d["refusal"], "capacity_exceeded");
    assert_eq!(d["detail"]["label"], "b");
}

#[test]
fn trace_replays_to_the_same_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let order = input("embed", "chain3.json");
    let args = [
        "embed",
        "--dims",
        "2",
        "--grid",
        "dyadic:2",
        "--order",
        &order,
        "--trace",
        trace.to_str().unwrap(),
    ];
    let first = bighom(&args);
    assert_eq!(first.code, 0);
    let replayed = bighom(&["embed", "--replay", trace.to_str().unwrap()]);
    assert_eq!(replayed.code, 0);
    assert_eq!(first.doc(), replayed.doc());
}

#[test]
fn out_flag_and_compact_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("weight.json");
    let space = input("finspace", "sierpinski.json");
    let r = bighom(&["finspace", "weight", &space, "--out", out.to_str().unwrap()]);
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, json!({"weight": 2, "points": 2}));
    let compact = bighom(&["finspace", "weight", &space, "--json"]);
    assert_eq!(compact.stdout.trim().lines().count(), 1);
}

#[test]
fn certificates_read_back_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let r = bighom(&[
        "finspace",
        "homotopy",
        &input("finspace", "down_step.json"),
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let v = bighom(&["finspace", "homotopy", cert.to_str().unwrap()]);
    assert_eq!(v.code, 0);
    assert_eq!(v.doc(), json!({"valid": true}));
    // Flip the tag: the DOWN step is not an UP step.
    let text = std::fs::read_to_string(&cert).unwrap().replace("DOWN", "UP");
    std::fs::write(&cert, text).unwrap();
    let bad = bighom(&["finspace", "homotopy", cert.to_str().unwrap()]);
    assert_eq!(bad.code, 1);
    assert_eq!(bad.doc()["valid"], false);
}

#[test]
fn bigmaps_outputs_feed_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).display().to_string();
    let lp = input("bigmaps", "loop.json");
    assert_eq!(
        bighom(&["bigmaps", "concat", &lp, &lp, "--out", &path("twice.json")]).code,
        0
    );
    let check = bighom(&["bigmaps", "check", &path("twice.json")]);
    assert_eq!(check.code, 0);
    assert_eq!(check.doc()["cells"], 9);
    assert_eq!(
        bighom(&["bigmaps", "reverse", &path("twice.json"), "--out", &path("back.json")]).code,
        0
    );
    assert_eq!(
        bighom(&["bigmaps", "reduce", &path("back.json"), "--out", &path("reduced.json")]).code,
        0
    );
    let v = bighom(&["bigmaps", "verify", &path("back.json"), &path("reduced.json")]);
    assert_eq!(v.code, 0);
    assert_eq!(v.doc()["valid"], true);
}

#[test]
fn quotient_images_lift_back() {
    let dir = tempfile::tempdir().unwrap();
    let atoms = input("quotient", "atoms.json");
    let r = bighom(&[
        "quotient",
        "--ambient-dims",
        "2",
        "--atoms",
        &atoms,
        "--eval",
        &input("quotient", "points.json"),
    ]);
    assert_eq!(r.code, 0);
    let images = dir.path().join("images.json");
    std::fs::write(&images, r.doc()["images"].to_string()).unwrap();
    let lifted = bighom(&[
        "quotient",
        "--ambient-dims",
        "2",
        "--atoms",
        &atoms,
        "--representative",
        images.to_str().unwrap(),
    ]);
    assert_eq!(lifted.code, 0);
    let reps = dir.path().join("reps.json");
    std::fs::write(&reps, lifted.doc()["representatives"].to_string()).unwrap();
    let again = bighom(&[
        "quotient",
        "--ambient-dims",
        "2",
        "--atoms",
        &atoms,
        "--eval",
        reps.to_str().unwrap(),
    ]);
    assert_eq!(again.doc()["images"], r.doc()["images"]);
}

#[test]
fn exit_codes_are_deterministic() {
    let cases: [&[&str]; 3] = [
        &["cardinal", "perfect-bound", "aleph(1)"],
        &["cardinal", "strong-limit", "aleph(w)"],
        &["lexint", "sample", "--dims", "2", "--depth", "2"],
    ];
    for args in cases {
        let (a, b) = (bighom(args), bighom(args));
        assert_eq!((a.code, &a.stdout), (b.code, &b.stdout), "{args:?}");
    }
}

#[test]
fn selftest_passes_and_filters() {
    let r = bighom(&["selftest"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let d = r.doc();
    assert_eq!(d["failed"], 0);
    assert_eq!(d["modules"].as_array().unwrap().len(), 7);
    let only = bighom(&["selftest", "--module", "finspace"]).doc();
    let modules = only["modules"].as_array().unwrap();
    assert_eq!(modules.len(), 1);
    assert_eq!(modules[0]["module"], "finspace");
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let p = entry.unwrap().path();
        let dest = to.join(p.file_name().unwrap());
        if p.is_dir() {
            copy_dir(&p, &dest);
        } else {
            std::fs::copy(&p, &dest).unwrap();
        }
    }
}

#[test]
fn corrupted_fixture_is_named() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixtures(), dir.path());
    std::fs::write(dir.path().join("finspace/t1.json"), "{\"args\": [\"finspace\"").unwrap();
    // A fixture whose input no longer matches its expectation.
    std::fs::write(
        dir.path().join("lexint/inputs/pair.json"),
        r#"[["1/4","1/3"],["1/2","1/4"]]"#,
    )
    .unwrap();
    let r = bighom_with(&["selftest"], None, &[("BIGHOM_FIXTURES", dir.path())]);
    assert_eq!(r.code, 1);
    let d = r.doc();
    assert_eq!(d["failed"], 2);
    let names: Vec<String> = d["modules"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|m| {
            m["failures"]
                .as_array()
                .unwrap()
                .iter()
                .map(|f| f["name"].as_str().unwrap().to_string())
        })
        .collect();
    assert_eq!(names, ["lexint/compare.json", "finspace/t1.json"]);
}
