use serde_json::json;
use witt_lab::checks;
use witt_lab::corpus::{default_corpus, entries_from_strings, DEFAULT_SIZE_CAP};
use witt_lab::report::{emit_reports, Format, Status, SuiteReport};
use witt_lab::suite::{replay, run_suite, RunOptions, SuiteError, SUITES};

fn entry<'a>(r: &'a SuiteReport, ring: &str, check: &str) -> &'a witt_lab::report::ResultEntry {
    r.results
        .iter()
        .find(|e| e.ring == ring && e.check == check)
        .unwrap_or_else(|| panic!("{ring} {check}"))
}

#[test]
fn torsion_location_default_corpus() {
    let corpus = default_corpus(2, DEFAULT_SIZE_CAP);
    let r = run_suite("torsion-location", 2, 2, &corpus, &RunOptions::default()).unwrap();
    assert_eq!(r.summary.fail, 0, "{:?}", r.failures().collect::<Vec<_>>());
    let z4 = entry(&r, "Z/4", "torsion-location");
    let w = z4.witness.as_ref().unwrap();
    assert_eq!(w["preduced"], json!(false));
    assert_eq!(w["torsion"], json!([2, 0]));
    assert_eq!(w["level"], json!(0));
    let z6 = entry(&r, "Z/6", "torsion-location").witness.clone().unwrap();
    assert_eq!(z6["preduced"], json!(true));
    assert_eq!(z6["all_at_level"], json!(1));
}

#[test]
fn delta_ring_levels() {
    let r = run_suite("delta-ring", 2, 2, &[], &RunOptions::default()).unwrap();
    assert!(r.passed());
    for level in 1..=3 {
        let g = entry(&r, &format!("Z[X0,X{level}]"), "generator");
        assert_eq!(g.status, Status::Pass);
        assert_eq!(g.witness.as_ref().unwrap()["delta"], json!("0"));
    }
}

#[test]
fn noetherian_lemma_on_z4() {
    let corpus = entries_from_strings(&["Z/4"]).unwrap();
    let r = run_suite("noetherian-lemma", 2, 3, &corpus, &RunOptions::default()).unwrap();
    let e = entry(&r, "Z/4", "ideal-containment");
    assert_eq!(e.status, Status::Pass);
    // V([2]) generates {V([0]), V([2])}; V^2([2]) likewise.
    assert_eq!(e.witness.as_ref().unwrap()["ideal_sizes"], json!([2, 2]));
}

#[test]
fn unknown_suite() {
    let err = run_suite("nope", 2, 2, &[], &RunOptions::default()).unwrap_err();
    assert_eq!(err, SuiteError::UnknownSuite("nope".into()));
}

#[test]
fn skip_accounting_and_determinism() {
    let corpus = entries_from_strings(&["Z/4", "GF(4)", "Z/6", "product(Z/2,Z/3)"]).unwrap();
    for name in SUITES {
        let a = run_suite(name, 2, 2, &corpus, &RunOptions::default()).unwrap();
        let b = run_suite(name, 2, 2, &corpus, &RunOptions::default()).unwrap();
        assert_eq!(emit_reports(std::slice::from_ref(&a), Format::Json), emit_reports(&[b], Format::Json));
        let declared = match checks::for_suite(name) {
            Some(c) => c.len() * corpus.len(),
            None => a.results.len(),
        };
        let s = a.summary;
        assert_eq!(s.pass + s.fail + s.skip, declared, "{name}");
        assert!(a.passed(), "{name}: {:?}", a.failures().collect::<Vec<_>>());
    }
}

#[test]
fn injected_fault_replays() {
    let corpus = entries_from_strings(&["Z/2", "Z/4"]).unwrap();
    let opts = RunOptions { seed: 0, fault_seed: Some(5) };
    let r = run_suite("ghost-hom", 2, 2, &corpus, &opts).unwrap();
    assert!(r.summary.fail > 0);
    let text = emit_reports(&[r], Format::Json);
    let back: SuiteReport = serde_json::from_str(&text).unwrap();
    let replays = replay(&back).unwrap();
    assert_eq!(replays.len(), back.summary.fail);
    assert!(replays.iter().all(|r| r.reproduced), "{replays:?}");
    // Without the fault the recorded inputs no longer fail.
    let mut clean = back.clone();
    clean.fault_seed = None;
    assert!(replay(&clean).unwrap().iter().all(|r| !r.reproduced));
}

#[test]
fn spectrum_reports_printed_form() {
    let corpus = entries_from_strings(&["Z/4", "Z/6"]).unwrap();
    let r = run_suite("spectrum", 3, 2, &corpus, &RunOptions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.observations.len(), 1);
    assert_eq!(r.observations[0].ring, "Z/4");
}

#[test]
fn printed_teichmuller_form_is_observed() {
    let corpus = entries_from_strings(&["GF(2)"]).unwrap();
    let r = run_suite("charp-identities", 2, 3, &corpus, &RunOptions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(entry(&r, "GF(2)", "v-teichmuller-product").status, Status::Pass);
    assert_eq!(entry(&r, "GF(2)", "v-teichmuller-printed-form").status, Status::Skip);
    assert_eq!(r.observations.len(), 1);
    // At n = 2 the extra term is truncated away and both forms agree.
    let r2 = run_suite("charp-identities", 2, 2, &corpus, &RunOptions::default()).unwrap();
    assert_eq!(entry(&r2, "GF(2)", "v-teichmuller-printed-form").status, Status::Pass);
}

#[test]
fn caps_mark_skips() {
    let corpus = entries_from_strings(&["GF(2)[x]/(x^2)", "Z/4[x]/(x^2)"]).unwrap();
    let r = run_suite("ghost-bijection", 2, 5, &corpus, &RunOptions::default()).unwrap();
    let big = entry(&r, "Z/4[x]/(x^2)", "ghost-bijective");
    assert_eq!(big.status, Status::Skip);
    assert!(big.reason.as_ref().unwrap().contains("exceeds enumeration cap"));
    assert_eq!(entry(&r, "GF(2)[x]/(x^2)", "ghost-bijective").status, Status::Pass);
}

#[test]
fn local_structure_examples() {
    let corpus = default_corpus(3, DEFAULT_SIZE_CAP);
    let r = run_suite("local-structure", 3, 2, &corpus, &RunOptions::default()).unwrap();
    assert!(r.passed());
    let e = entry(&r, "GF(3)[x]/(x^3-x)", "closing-example");
    assert_eq!(e.witness.as_ref().unwrap(), &json!({"cardinality": 729, "idempotents": 8, "order_of_one": 9}));
    assert_eq!(entry(&r, "GF(9)", "dvr-shadow").status, Status::Pass);
    assert_eq!(entry(&r, "Z/9", "dvr-shadow").status, Status::Skip);
}
