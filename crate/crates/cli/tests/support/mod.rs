//! Golden-file pipeline shared by the CLI tests and the acceptance suite.

use std::path::Path;

/// Files produced by [`end_pipeline`], in order.
pub const GOLDEN_FILES: [&str; 5] = [
    "case1.json",
    "validate.json",
    "classify.json",
    "mesh.obj",
    "mesh.metric.json",
];

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["nullsl2"];
    full.extend_from_slice(args);
    let code = nullsl2_cli::run_with_env(full, None, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// endmodel -> validate -> classify -> mesh under `config`, with every
/// artifact written into `work`. Returns `(name, contents)` pairs.
pub fn end_pipeline(work: &Path, config: &Path) -> Vec<(String, String)> {
    let cfg = config.to_str().unwrap();
    let case = work.join("case1.json");
    let case = case.to_str().unwrap();
    let mesh = work.join("mesh.obj");

    let (code, _, err) = cli(&["endmodel", "1", "--config", cfg, "--out", case]);
    assert_eq!(code, 0, "endmodel: {err}");
    let (code, validate, err) = cli(&["validate", case, "--config", cfg]);
    assert_eq!(code, 0, "validate: {err}");
    let (code, classify, err) = cli(&["classify", case, "--config", cfg]);
    assert_eq!(code, 0, "classify: {err}");
    let (code, _, err) = cli(&["mesh", case, "--config", cfg, "--out", mesh.to_str().unwrap()]);
    assert_eq!(code, 0, "mesh: {err}");

    let read = |name: &str| std::fs::read_to_string(work.join(name)).unwrap();
    vec![
        ("case1.json".into(), read("case1.json")),
        ("validate.json".into(), validate),
        ("classify.json".into(), classify),
        ("mesh.obj".into(), read("mesh.obj")),
        ("mesh.metric.json".into(), read("mesh.metric.json")),
    ]
}

/// Compares against the stored goldens, or rewrites them when
/// `UPDATE_GOLDEN=1`. Returns the names that differ.
pub fn compare_goldens(produced: &[(String, String)], golden: &Path) -> Vec<String> {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut mismatched = Vec::new();
    for (name, text) in produced {
        let path = golden.join(name);
        if update {
            std::fs::write(&path, text).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(stored) if stored == *text => {}
            _ => mismatched.push(name.clone()),
        }
    }
    mismatched
}
