//! Command-line integration: exit codes, file round trips, the corpus
//! runner, and report determinism.

use std::path::{Path, PathBuf};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// Fixture path as an owned string, for splicing into argv.
fn fx(rel: &str) -> String {
    fixture(rel).to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> = std::iter::once("qmedia".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    qmedia::cli::run(&argv)
}

#[test]
fn group_check_exit_codes() {
    let (code, out) = run(&["group", "check", &fx("groups/z3.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"verdict\": true"));
    let (code, out) = run(&["group", "check", &fx("groups/bad_latin.json")]);
    assert_eq!(code, 1, "{out}");
    let (code, _) = run(&["group", "check", &fx("groups/missing.json")]);
    assert_eq!(code, 2);
}

#[test]
fn usage_error_is_exit_2() {
    let (code, _) = run(&["qm", "frobnicate"]);
    assert_eq!(code, 2);
    let (code, _) = run(&[]);
    assert_eq!(code, 2);
}

#[test]
fn word_reduce() {
    let (code, out) = run(&["word", "reduce", &fx("presentations/p4_z2.json"), "b:1 a:1 b:1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"reduced\": \"a:1\""), "{out}");
    // Unknown vertex is an input error.
    let (code, _) = run(&["word", "reduce", &fx("presentations/p4_z2.json"), "x:1"]);
    assert_eq!(code, 2);
}

#[test]
fn qm_check_verdicts() {
    let (code, _) = run(&["qm", "check", &fx("presentations/p4_z2.json"), "-r", "3"]);
    assert_eq!(code, 0);
    let (code, out) = run(&["qm", "check", &fx("graphs/k32.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("k32"), "{out}");
    let (code, out) = run(&["qm", "check", &fx("graphs/c6.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("quadrangle"), "{out}");
}

#[test]
fn qm_ball_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ball.json");
    let (code, _) = run(&[
        "qm",
        "ball",
        fixture("presentations/single_z3.json").to_str().unwrap(),
        "-r",
        "1",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    // The dump re-imports and checks clean.
    let (code, out) = run(&["qm", "check", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    // Round trip: export of the import equals the file.
    let text = std::fs::read_to_string(&out_path).unwrap();
    let gf: qmedia::io::GraphFile = serde_json::from_str(&text).unwrap();
    let again =
        qmedia::io::to_stable_json(&qmedia::io::GraphFile::from_graph(&gf.to_graph().unwrap(), true))
            .unwrap();
    assert_eq!(text, again);
}

#[test]
fn qm_gated_and_dot() {
    let (code, out) = run(&[
        "qm",
        "gated",
        fixture("presentations/p4_z2.json").to_str().unwrap(),
        "-r",
        "3",
        "--set",
        "0,a:1,a:1 b:1,b:1",
    ]);
    // {1, a, b, ab} is a gated coset ball.
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&[
        "qm",
        "dot",
        fixture("graphs/c6.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph {"));
    assert!(out.contains("hyp="));
}

#[test]
fn act_special_check() {
    let (code, out) = run(&[
        "act",
        "special-check",
        fixture("presentations/p4_z2.json").to_str().unwrap(),
        "-r",
        "4",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"special\": true"));
    // Subgroup action with explicit generators.
    let (code, out) = run(&[
        "act",
        "special-check",
        fixture("presentations/p4_z2.json").to_str().unwrap(),
        "--gens",
        "a:1; b:1",
        "-r",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn embed_build_and_verify() {
    let (code, out) = run(&[
        "embed",
        "build",
        fixture("actions/act_p4_full.json").to_str().unwrap(),
        "-r",
        "5",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"orbit_count\": 4"), "{out}");
    let (code, out) = run(&[
        "embed",
        "verify",
        fixture("actions/act_single_z3_trivial.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    // Bigger-K degrades gatedness: verify exits 1.
    let (code, out) = run(&[
        "embed",
        "verify",
        fixture("actions/act_single_z3_trivial.json").to_str().unwrap(),
        "--bigger-k",
        "1",
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("\"gated\": false"), "{out}");
}

#[test]
fn ragg_subcommands() {
    let (code, _) = run(&["ragg", "validate", &fx("ragg/a_box_b.json")]);
    assert_eq!(code, 0);
    let (code, out) = run(&["ragg", "check", &fx("ragg/a_rtimes.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("\"i\": false"), "{out}");
    assert!(out.contains("\"iii\": false"), "{out}");
    let (code, _) = run(&["ragg", "check", &fx("ragg/hnn_cover.json")]);
    assert_eq!(code, 0);
    let (code, out) = run(&["ragg", "psi", &fx("ragg/a_box_b.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("t.eA"), "{out}");
    // Psi refuses a failing spec with verdict false.
    let (code, _) = run(&["ragg", "psi", &fx("ragg/a_rtimes.json")]);
    assert_eq!(code, 1);
    // Groupoid ball dump.
    let (code, out) = run(&[
        "ragg",
        "ball",
        fixture("ragg/a_box_a.json").to_str().unwrap(),
        "--omega",
        "u.0",
        "-r",
        "2",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn ragg_double_cover_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("cover.json");
    let (code, _) = run(&[
        "ragg",
        "cover",
        fixture("ragg/a_rtimes.json").to_str().unwrap(),
        "--double",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let produced = std::fs::read_to_string(&out_path).unwrap();
    let bundled = std::fs::read_to_string(fixture("ragg/a_box_a.json")).unwrap();
    assert_eq!(produced, bundled, "cover must equal the bundled A□A spec byte for byte");
}

#[test]
fn corpus_summary() {
    let (code, out) = run(&["corpus", fixture("ragg").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let verdict_of = |name: &str| -> bool {
        rows.iter()
            .find(|r| r["file"] == name)
            .and_then(|r| r["result"]["conditions_pass"].as_bool())
            .unwrap_or_else(|| panic!("row {name} missing in {out}"))
    };
    assert!(!verdict_of("a_rtimes.json"));
    assert!(verdict_of("a_box_a.json"));
    assert!(verdict_of("a_box_b.json"));
    assert!(verdict_of("hnn_cover.json"));
    assert!(!verdict_of("g_bullet_h.json"));

    // Empty directory: empty summary, exit 0.
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["rows"]
        .as_array()
        .unwrap()
        .is_empty());

    // Corrupted JSON: per-file error entry, overall exit 2.
    std::fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    let (code, out) = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("error"), "{out}");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["ragg", "check", "ragg/g_bullet_h.json"],
        vec!["qm", "hyperplanes", "presentations/square_z2.json"],
        vec!["embed", "verify", "actions/act_a_box_a.json"],
    ] {
        let full: Vec<String> = args
            .iter()
            .map(|a| {
                if a.contains('/') {
                    fixture(a).to_str().unwrap().to_string()
                } else {
                    a.to_string()
                }
            })
            .collect();
        let argv: Vec<String> =
            std::iter::once("qmedia".to_string()).chain(full.iter().cloned()).collect();
        let (c1, r1) = qmedia::cli::run(&argv);
        let (c2, r2) = qmedia::cli::run(&argv);
        assert_eq!(c1, c2);
        assert_eq!(r1, r2, "non-deterministic report for {args:?}");
    }
}
