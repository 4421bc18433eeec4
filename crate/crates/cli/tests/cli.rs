mod support;

use std::path::{Path, PathBuf};

use nullsl2_cli::{parse_obj_vertices, recheck_ball, run_with_env};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_seeded(args, None)
}

fn run_seeded(args: &[&str], seed: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["nullsl2"];
    full.extend_from_slice(args);
    let code = run_with_env(full, seed, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn validate_exit_codes() {
    let (code, out, _) = run(&["validate", &fixture("case1.json")]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["null"], true);

    let (code, out, _) = run(&["validate", &fixture("nonnull.json")]);
    assert_eq!(code, 1);
    let r = json(&out);
    assert_eq!(r["null"], false);
    assert_eq!(r["unimodular"], true);

    let (code, _, err) = run(&["validate", &fixture("malformed.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot parse"));

    let (code, _, _) = run(&["validate", "/nonexistent/curve.json"]);
    assert_eq!(code, 2);
}

#[test]
fn windowed_validation_agrees() {
    let (code, out, _) = run(&["validate", &fixture("case1.json"), "--trunc", "24"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn classify_ends() {
    let (code, out, _) = run(&["classify", &fixture("case1.json")]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["multiplicity"], 1);
    assert_eq!(r["smooth_candidate"], true);

    let (code, out, _) = run(&["classify", &fixture("case_m3.json"), "--at", "0,0"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["multiplicity"], 3);

    let (code, _, err) = run(&["classify", &fixture("entire.json"), "--at", "0,0"]);
    assert_eq!(code, 1);
    assert!(err.contains("holomorphically"), "{err}");
}

#[test]
fn mesh_case1_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("case1.obj");
    let (code, _, err) = run(&[
        "mesh",
        &fixture("case1.json"),
        "--grid",
        "32x64",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&obj).unwrap();
    let v = parse_obj_vertices(&text);
    assert_eq!(v.len(), 2048);
    assert!(v.iter().all(|b| b.iter().map(|x| x * x).sum::<f64>() < 1.0));
    assert!(recheck_ball(&v) < 1e-8);
    let faces = text.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(faces, 2 * 31 * 64);
    let side = json(&std::fs::read_to_string(dir.path().join("case1.metric.json")).unwrap());
    assert_eq!(side["metric"].as_array().unwrap().len(), 2048);
}

#[test]
fn mesh_de_sitter_target() {
    let (code, out, _) = run(&["mesh", &fixture("case1.json"), "--grid", "4x8", "--target", "s31"]);
    assert_eq!(code, 0);
    assert_eq!(parse_obj_vertices(&out).len(), 32);
}

#[test]
fn mesh_degenerate_and_pole() {
    let (code, out, err) = run(&["mesh", &fixture("identity.json"), "--grid", "4x8"]);
    assert_eq!(code, 0);
    assert!(err.contains("degenerate"));
    assert!(parse_obj_vertices(&out).iter().all(|b| *b == [0.0, 0.0, 0.0]));

    // the vertex at angle pi on the inner ring is z = 0
    let (code, _, err) = run(&[
        "mesh",
        &fixture("case1.json"),
        "--grid",
        "4x8",
        "--center",
        "0.25,0",
        "--inner",
        "0.25",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("pole"), "{err}");

    let (code, _, _) = run(&["mesh", &fixture("case1.json"), "--grid", "4x8", "--inner", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn solve_fixtures() {
    let (code, out, err) = run(&["solve", &fixture("toy_spray.json"), &fixture("unit_circle.json")]);
    assert_eq!(code, 0, "{err}");
    let r = json(&out);
    assert!(r["residual"].as_f64().unwrap() < 1e-10);
    assert!(r["iterations"].as_u64().unwrap() <= 20);
    let z = &r["zeta0"][0];
    assert!((z[0].as_f64().unwrap() + 0.3).abs() < 1e-9);

    let (code, out, _) = run(&["solve", &fixture("exact_spray.json"), &fixture("small_circle.json")]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["iterations"], 1);
    assert_eq!(r["zeta0"][0][0], 0.0);
    assert_eq!(r["zeta0"][0][1], 0.0);

    let (code, _, err) = run(&["solve", &fixture("orthogonal_spray.json"), &fixture("unit_circle.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("singular"), "{err}");
}

#[test]
fn solve_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.json");
    let (code, _, _) = run(&[
        "solve",
        &fixture("toy_spray.json"),
        &fixture("unit_circle.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    assert!(csv.starts_with("cycle,re1,im1,re2,im2,re3,im3\n"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn endmodel_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    for m in 1..=8 {
        let path = dir.path().join(format!("m{m}.json"));
        let p = path.to_str().unwrap();
        let (code, _, _) = run(&["endmodel", &m.to_string(), "--out", p]);
        assert_eq!(code, 0);
        let (code, out, _) = run(&["validate", p]);
        assert_eq!(code, 0, "m = {m}: {out}");
        let (code, out, _) = run(&["classify", p]);
        assert_eq!(code, 0);
        assert_eq!(json(&out)["multiplicity"], m);
    }
    let (code, _, _) = run(&["endmodel", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["endmodel", "-3"]);
    assert_eq!(code, 2);
}

#[test]
fn endmodel_case2_encoding() {
    let (_, out, _) = run(&["endmodel", "2"]);
    let r = json(&out);
    // F2 = -z^3/4, F3 = -1/(2 z^3), F4 = 9z/8
    assert_eq!(r["F2"]["rational"]["num"][3][0], -1.0);
    assert_eq!(r["F2"]["rational"]["den"][0][0], 4.0);
    assert_eq!(r["F3"]["rational"]["num"][0][0], -1.0);
    assert_eq!(r["F3"]["rational"]["den"][3][0], 2.0);
    assert_eq!(r["F4"]["rational"]["num"][1][0], 9.0);
    assert_eq!(r["F4"]["rational"]["den"][0][0], 8.0);
}

#[test]
fn endmodel_recentered() {
    let (code, out, _) = run(&["endmodel", "1", "--center", "-0.5,0.25"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["poles"][0][0], -0.5);
    assert_eq!(r["poles"][0][1], 0.25);
}

#[test]
fn seed_env_overrides_config() {
    let cfg = golden_dir().join("config.json");
    let cfg = cfg.to_str().unwrap();
    let (_, out, _) = run(&["validate", &fixture("case1.json"), "--config", cfg]);
    assert_eq!(json(&out)["seed"], 7);
    let (_, out, _) = run_seeded(&["validate", &fixture("case1.json"), "--config", cfg], Some("99"));
    assert_eq!(json(&out)["seed"], 99);
    let (code, _, _) = run_seeded(&["validate", &fixture("case1.json")], Some("abc"));
    assert_eq!(code, 2);
}

#[test]
fn golden_pipeline() {
    let work = tempfile::tempdir().unwrap();
    let produced = support::end_pipeline(work.path(), &golden_dir().join("config.json"));
    let names: Vec<&str> = produced.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, support::GOLDEN_FILES);
    let bad = support::compare_goldens(&produced, &golden_dir());
    assert!(bad.is_empty(), "golden mismatch in {bad:?}; rerun with UPDATE_GOLDEN=1 after review");
    // a second run is byte-identical
    let again = support::end_pipeline(work.path(), &golden_dir().join("config.json"));
    assert_eq!(produced, again);
}
