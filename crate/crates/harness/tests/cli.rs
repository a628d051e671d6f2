use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn witt_lab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witt-lab"))
        .args(args)
        .env("WITT_LAB_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_json_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let o = witt_lab(dir.path(), &["classify", "Z/4", "--p", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["flags"]["reduced"], false);
    assert_eq!(v["flags"]["preduced"], false);
    assert_eq!(v["flags"]["local"], true);
    assert_eq!(v["witnesses"]["preduced"]["element"], "2");

    let o = witt_lab(dir.path(), &["classify", "GF(2)[x]/(x^2-x)", "--p", "2"]);
    let text = stdout(&o);
    assert!(text.contains("lattice: field => domain => reduced => preduced"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("perfect") && l.contains("yes")));
}

#[test]
fn jideal_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = witt_lab(dir.path(), &["jideal", "Z/4", "--p", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ideal"], serde_json::json!([0, 2]));
    assert_eq!(v["quotient_order"], 2);
    let o = witt_lab(dir.path(), &["jideal", "GF(2)[x]/(x^2)", "--p", "2"]);
    assert!(stdout(&o).starts_with("J(GF(2)[x]/(x^2)) = {0, x}"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["classify", "Z/", "--p", "2"][..],
        &["classify", "Z/4[x]/(2x^2+1)", "--p", "2"],
        &["classify", "GF(6)", "--p", "2"],
        &["classify", "Z/4", "--p", "4"],
        &["verify", "--suite", "nope", "--p", "2", "--n", "2"],
        &["verify", "--suite", "ghost-hom", "--p", "2", "--n", "9"],
        &["frobnicate"],
    ] {
        let o = witt_lab(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = witt_lab(dir.path(), &["classify", "Z/", "--p", "2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 2"));
}

#[test]
fn verify_formats_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    std::fs::write(&corpus, "Z/4\nGF(4) # field\n").unwrap();
    let c = corpus.to_str().unwrap();
    let o = witt_lab(dir.path(), &["verify", "--suite", "fv-identities", "--p", "2", "--n", "3", "--corpus", c, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["corpus"], serde_json::json!(["Z/4", "GF(4)"]));
    assert_eq!(v["summary"]["fail"], 0);
    assert!(dir.path().join("witt-p2-n3.json").exists());

    let o = witt_lab(dir.path(), &["verify", "--suite", "jideal", "--p", "2", "--n", "2", "--corpus", c, "--csv"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 3);

    let o = witt_lab(dir.path(), &["verify", "--suite", "torsion-location", "--p", "2", "--n", "2", "--corpus", c]);
    let text = stdout(&o);
    assert!(text.starts_with("suite torsion-location (p=2, n=2, seed=0)"));
    assert!(text.contains("summary: 4 pass, 0 fail, 0 skip"));
}

#[test]
fn tampered_cache_is_regenerated() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "characteristic", "--p", "3", "--n", "2", "--size-cap", "4"];
    assert_eq!(witt_lab(dir.path(), &args).status.code(), Some(0));
    let path = dir.path().join("witt-p3-n2.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"checksum\"", "\"checksum_\"", 1)).unwrap();
    assert!(witt_core::WittPolyTable::load(&path).is_err());
    // A corrupt cache entry is regenerated, not trusted.
    assert_eq!(witt_lab(dir.path(), &args).status.code(), Some(0));
    assert!(witt_core::WittPolyTable::load(&path).is_ok());
}

#[test]
fn fault_injection_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let r = report.to_str().unwrap();
    let o = witt_lab(dir.path(), &["verify", "--suite", "ghost-hom", "--p", "3", "--n", "2", "--size-cap", "9", "--json", "--out", r]);
    assert_eq!(o.status.code(), Some(0));
    let o = witt_lab(dir.path(), &["replay", r]);
    assert_eq!(o.status.code(), Some(0));

    let o = witt_lab(dir.path(), &[
        "verify", "--suite", "ghost-hom", "--p", "3", "--n", "2", "--size-cap", "9", "--json", "--out", r, "--inject-fault", "11",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["fault_seed"], 11);
    let failure = v["results"].as_array().unwrap().iter().find(|e| e["status"] == "fail").unwrap();
    assert!(failure["witness"]["inputs"].is_array());

    let o = witt_lab(dir.path(), &["replay", r]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(!stdout(&o).contains("NOT reproduced"));

    // Dropping the fault makes the recorded failures disappear.
    let mut clean = v.clone();
    clean.as_object_mut().unwrap().remove("fault_seed");
    std::fs::write(&report, clean.to_string()).unwrap();
    assert_eq!(witt_lab(dir.path(), &["replay", r]).status.code(), Some(3));
}

#[test]
fn table_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = witt_lab(dir.path(), &["table", "--p", "2", "--n", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let t = witt_core::WittPolyTable::load(&out).unwrap();
    assert_eq!((t.p(), t.n()), (2, 3));
    let o = witt_lab(dir.path(), &["table", "--p", "2", "--n", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
