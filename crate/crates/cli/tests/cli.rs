use std::path::Path;
use std::process::{Command, Output};

use ddbar_core::bicomplex::CohomologyReport;
use proptest::prelude::*;
use tempfile::TempDir;

fn ddbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddbar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Numbers of the table row starting with `label`, grouped by `|` cells.
fn row(text: &str, label: &str) -> Vec<Vec<usize>> {
    let line = text.lines().find(|l| l.starts_with(label)).expect("row present");
    line.split('|')
        .skip(1)
        .filter(|c| !c.trim().is_empty())
        .map(|c| c.split_whitespace().map(|n| n.parse().unwrap()).collect())
        .collect()
}

fn verdict_line(text: &str, name: &str) -> String {
    text.lines()
        .find(|l| l.trim_start().starts_with(name))
        .unwrap_or_else(|| panic!("no `{name}` line"))
        .split_whitespace()
        .last()
        .unwrap()
        .to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn models_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../models"))
}

#[test]
fn iwasawa_table_rows() {
    let o = ddbar(&["analyze", "--builtin", "iwasawa", "--checks", "lemma"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let h = row(&text, "h^k");
    let triples: Vec<Vec<usize>> = h[1..=5].to_vec();
    assert_eq!(
        triples,
        vec![
            vec![5, 4, 6],
            vec![11, 10, 12],
            vec![14, 14, 14],
            vec![11, 12, 10],
            vec![5, 6, 4]
        ]
    );
    let b: Vec<usize> = row(&text, "b_k").into_iter().flatten().collect();
    assert_eq!(b, vec![1, 4, 8, 10, 8, 4, 1]);
}

#[test]
fn model_file_matches_builtin() {
    let file = models_dir().join("iwasawa.model");
    let from_file = ddbar(&["analyze", file.to_str().unwrap(), "--json"]);
    let from_builtin = ddbar(&["analyze", "--builtin", "iwasawa", "--json"]);
    assert!(from_file.status.success());
    assert_eq!(stdout(&from_file), stdout(&from_builtin));
}

#[test]
fn torus_lemma_check() {
    let o = ddbar(&["analyze", "--builtin", "torus3", "--checks", "lemma"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(verdict_line(&text, "lemma_direct"), "true");
    assert_eq!(verdict_line(&text, "bc_equality_all_k"), "true");
    assert!(!text.contains("hodge\n"));
}

#[test]
fn json_and_table_agree() {
    let json = ddbar(&["analyze", "--builtin", "kodaira_thurston", "--json"]);
    let report: CohomologyReport = serde_json::from_str(&stdout(&json)).unwrap();
    let table = stdout(&ddbar(&["analyze", "--builtin", "kodaira_thurston"]));
    let h = row(&table, "h^k");
    for (k, cell) in h.iter().enumerate() {
        assert_eq!(cell, &vec![report.hk.dolbeault[k], report.hk.bc[k], report.hk.aeppli[k]]);
    }
    let b: Vec<usize> = row(&table, "b_k").into_iter().flatten().collect();
    assert_eq!(b, report.betti);
    assert_eq!(
        verdict_line(&table, "lemma_direct"),
        report.verdicts.lemma_direct.to_string()
    );
    // every top-level field is present
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    for field in [
        "p_max", "q_max", "n", "conjugation", "hpq", "hk", "betti", "euler_characteristic",
        "varouchas", "spectral", "natural_maps", "inequalities", "hodge", "verdicts",
    ] {
        assert!(value.get(field).is_some(), "{field}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let broken = write(
        &dir,
        "broken.model",
        r#"{"name": "broken", "n": 2, "dphi": [[], [{"type": "02", "j": 1, "k": 2, "coeff": 1}]]}"#,
    );
    let o = ddbar(&["analyze", &broken]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(0,2)"), "{}", stderr(&o));

    // ∂ and ∂̄ both nonzero on a single arrow chain with ∂² ≠ 0
    let bad = write(
        &dir,
        "bad.json",
        r#"{"p_max": 2, "q_max": 0,
            "dims": [{"p": 0, "q": 0, "dim": 1}, {"p": 1, "q": 0, "dim": 1}, {"p": 2, "q": 0, "dim": 1}],
            "del": [{"p": 0, "q": 0, "matrix": [["1"]]}, {"p": 1, "q": 0, "matrix": [["1"]]}]}"#,
    );
    assert_eq!(ddbar(&["analyze", &bad]).status.code(), Some(1));

    let garbage = write(&dir, "garbage.json", "{ not json");
    assert_eq!(ddbar(&["analyze", &garbage]).status.code(), Some(2));
    let missing = dir.path().join("missing.model");
    assert_eq!(ddbar(&["analyze", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ddbar(&["analyze", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(ddbar(&["analyze", "--builtin", "iwasawa", "--checks", "x"]).status.code(), Some(2));
    assert_eq!(ddbar(&["search", "--budget", "0"]).status.code(), Some(2));

    let not_pd = write(
        &dir,
        "gram.json",
        r#"{"p_max": 0, "q_max": 0, "dims": [{"p": 0, "q": 0, "dim": 1}],
            "gram": [{"p": 0, "q": 0, "matrix": [["-1"]]}]}"#,
    );
    assert_eq!(ddbar(&["analyze", &not_pd]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.txt");
    let o = ddbar(&["analyze", "--builtin", "torus1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("b_k"));
}

#[test]
fn random_is_deterministic() {
    let args = ["random", "--seed", "1", "--cases", "100", "--conj", "true"];
    let a = ddbar(&args);
    let b = ddbar(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("100 passed, 0 failed"));

    let empty = ddbar(&["random", "--size", "0", "--cases", "3"]);
    assert!(empty.status.success());
    assert!(stdout(&empty).contains("3 passed"));
}

#[test]
fn search_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("found.json");
    let o = ddbar(&["search", "--constraints", "lemma_fails", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("found after"));
    let a = ddbar(&["analyze", out.to_str().unwrap(), "--json"]);
    assert!(a.status.success());
    let report: CohomologyReport = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(!report.verdicts.lemma_direct);

    // re-ingesting twice gives the same report
    let again = ddbar(&["analyze", out.to_str().unwrap(), "--json"]);
    assert_eq!(stdout(&a), stdout(&again));

    let first = ddbar(&["search"]);
    assert!(stderr(&first).contains("found after 1 assemblies: dot(0,0)"));
    let none = ddbar(&["search", "--constraints", "lemma_fails", "--budget", "1"]);
    assert!(none.status.success());
    assert!(stderr(&none).contains("none within budget"));
}

#[test]
fn builtin_listing() {
    let o = ddbar(&["builtin", "--list"]);
    let names = stdout(&o);
    assert!(names.lines().any(|l| l == "iwasawa"));
    assert!(names.lines().any(|l| l == "torus3"));
    let model = stdout(&ddbar(&["builtin", "iwasawa"]));
    let shipped = std::fs::read_to_string(models_dir().join("iwasawa.model")).unwrap();
    let a = ddbar_core::lie::parse_model(&model).unwrap();
    let b = ddbar_core::lie::parse_model(&shipped).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    /// Mutated inputs only ever exit with 0, 1 or 2.
    #[test]
    fn fuzzed_inputs_respect_exit_codes(cut in 0usize..200, byte in any::<u8>(), pos in 0usize..200) {
        let base = r#"{"p_max": 1, "q_max": 1,
            "dims": [{"p": 0, "q": 0, "dim": 1}, {"p": 1, "q": 0, "dim": 1}, {"p": 0, "q": 1, "dim": 1}, {"p": 1, "q": 1, "dim": 1}],
            "del": [{"p": 0, "q": 0, "matrix": [["1"]]}, {"p": 0, "q": 1, "matrix": [["-1"]]}],
            "delbar": [{"p": 0, "q": 0, "matrix": [["1"]]}, {"p": 1, "q": 0, "matrix": [["1"]]}]}"#;
        let mut bytes = base.as_bytes().to_vec();
        bytes.truncate(bytes.len().min(cut + 150));
        if pos < bytes.len() {
            bytes[pos] = byte;
        }
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("fuzz.json");
        std::fs::write(&path, &bytes).unwrap();
        let code = ddbar(&["analyze", path.to_str().unwrap(), "--checks", "lemma"]).status.code();
        prop_assert!(matches!(code, Some(0..=2)), "exit {:?}", code);
    }
}
