//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` cannot be met as stated; the run still
//! evaluates them literally and prints FAIL with the reason. The process exits
//! nonzero only when some other criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use witt_core::predicates::preduced_ideal;
use witt_core::witt_poly::WittPolyTable;
use witt_core::{Elem, IntPolynomial, RingHandle, WittRing};
use witt_lab::corpus::{default_corpus, entries_from_strings, CorpusEntry, DEFAULT_SIZE_CAP};
use witt_lab::report::{Coverage, ResultEntry, Status, SuiteReport};
use witt_lab::spec::RingSpec;
use witt_lab::suite::{run_suite, RunOptions};

const KNOWN_FAILURES: [(u32, &str); 2] = [
    (
        3,
        "k-ary identities over |W_n(R)| up to 4096 need up to 7e10 tuples; those entries are sampled",
    ),
    (
        4,
        "the printed V^u([r])w expansion lacks a factor [r] in its last term and fails for n >= 3",
    ),
];

type Outcome = Result<String, String>;

fn suite(name: &str, p: u64, n: usize, corpus: &[CorpusEntry]) -> SuiteReport {
    run_suite(name, p, n, corpus, &RunOptions::default()).expect("suite runs")
}

fn failures(r: &SuiteReport) -> Vec<String> {
    r.failures()
        .map(|e| format!("{} {} {} (p={}, n={})", r.suite, e.ring, e.check, r.p, r.n))
        .collect()
}

fn find<'a>(r: &'a SuiteReport, ring: &str, check: &str) -> Option<&'a ResultEntry> {
    r.results.iter().find(|e| e.ring == ring && e.check == check)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn v(name: &str) -> IntPolynomial {
    IntPolynomial::var(name)
}

fn c(k: i64) -> IntPolynomial {
    IntPolynomial::constant(k)
}

fn table_generation() -> Outcome {
    let start = Instant::now();
    let mut terms = Vec::new();
    for (p, n) in [(2, 5), (3, 4), (5, 3)] {
        let t = WittPolyTable::generate(p, n).map_err(|e| format!("p={p} n={n}: {e}"))?;
        t.verify().map_err(|e| format!("p={p} n={n}: {e}"))?;
        terms.push(t.sum().iter().chain(t.prod()).map(|f| f.num_terms()).sum::<usize>());
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("grid generated and verified in {:.2?}; sum+product terms {terms:?}", elapsed))
}

fn small_oracles() -> Outcome {
    let t2 = WittPolyTable::generate(2, 2).map_err(|e| e.to_string())?;
    let s1 = &(&v("X1") + &v("Y1")) - &(&v("X0") * &v("Y0"));
    ensure(t2.sum()[1] == s1, format!("S1 = {}", t2.sum()[1]))?;
    let p1 = &(&(&v("X0").pow(2) * &v("Y1")) + &(&v("X1") * &v("Y0").pow(2))) + &(&c(2) * &(&v("X1") * &v("Y1")));
    ensure(t2.prod()[1] == p1, format!("P1 = {}", t2.prod()[1]))?;
    for p in [2u64, 3] {
        let t = WittPolyTable::generate(p, 2).map_err(|e| e.to_string())?;
        let f0 = &v("X0").pow(p as u32) + &(&c(p as i64) * &v("X1"));
        ensure(t.frob()[0] == f0, format!("p={p}: F0 = {}", t.frob()[0]))?;
    }
    Ok("S1, P1 (p=2) and F0 (p=2,3) equal the hand-derived polynomials".into())
}

fn within_cap(ring: &str, n: usize) -> bool {
    RingSpec::parse(ring)
        .ok()
        .and_then(|s| s.build().ok())
        .map(|r| (r.order() as f64).powi(n as i32) <= 1e5)
        .unwrap_or(false)
}

fn identity_suites() -> Outcome {
    let start = Instant::now();
    let (mut exhaustive, mut sampled, mut entries) = (0, 0, 0);
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let corpus = default_corpus(p, DEFAULT_SIZE_CAP);
        for n in [2usize, 3] {
            for name in ["ghost-hom", "fv-identities"] {
                let r = suite(name, p, n, &corpus);
                bad.extend(failures(&r));
                for e in &r.results {
                    if !within_cap(&e.ring, n) {
                        continue;
                    }
                    entries += 1;
                    match (e.status, e.coverage) {
                        (Status::Pass, Some(Coverage::Exhaustive)) => exhaustive += 1,
                        (Status::Pass, Some(Coverage::Sampled)) => sampled += 1,
                        (Status::Skip, _) => bad.push(format!("{} {} skipped within cap", e.ring, e.check)),
                        _ => {}
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(bad.is_empty(), format!("{} problems, first: {}", bad.len(), bad.first().cloned().unwrap_or_default()))?;
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    let summary = format!(
        "{entries} entries in cap, zero failures, {exhaustive} exhaustive, {sampled} sampled, {:.1?}",
        elapsed
    );
    ensure(sampled == 0, format!("{summary}: sampled entries are not exhaustive"))?;
    Ok(summary)
}

fn charp_suite() -> Outcome {
    let (mut printed, mut sampled, mut entries) = (0, 0, 0);
    let mut other = Vec::new();
    let mut rings = 0;
    for p in [2u64, 3] {
        let corpus: Vec<CorpusEntry> = default_corpus(p, DEFAULT_SIZE_CAP)
            .into_iter()
            .filter(|e| e.spec.build().unwrap().characteristic() == p)
            .collect();
        rings += corpus.len();
        for n in [2usize, 3] {
            let r = suite("charp-identities", p, n, &corpus);
            for e in &r.results {
                entries += 1;
                match (e.check.as_str(), e.status, e.coverage) {
                    ("v-teichmuller-printed-form", Status::Pass, _) | ("order-of-one", Status::Pass, _) => {}
                    ("v-teichmuller-printed-form", _, _) => printed += 1,
                    (_, Status::Pass, Some(Coverage::Exhaustive)) => {}
                    (_, Status::Pass, Some(Coverage::Sampled)) => sampled += 1,
                    _ => other.push(format!("{} {} p={p} n={n}: {:?}", e.ring, e.check, e.status)),
                }
            }
        }
    }
    ensure(other.is_empty(), format!("unexpected: {other:?}"))?;
    let summary = format!(
        "{rings} char-p rings, {entries} entries, corrected identities and order_of_one = p^n pass; \
         printed V^u([r])w form refuted on {printed} entries; {sampled} binary entries sampled"
    );
    ensure(printed == 0 && sampled == 0, summary.clone())?;
    Ok(summary)
}

fn torsion_location() -> Outcome {
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let corpus = default_corpus(p, DEFAULT_SIZE_CAP);
        for n in [2usize, 3] {
            bad.extend(failures(&suite("torsion-location", p, n, &corpus)));
        }
    }
    ensure(bad.is_empty(), format!("counterexamples: {bad:?}"))?;
    let corpus = default_corpus(2, DEFAULT_SIZE_CAP);
    for n in [2usize, 3] {
        let r = suite("torsion-location", 2, n, &corpus);
        for ring in ["Z/4", "GF(2)[x]/(x^2)"] {
            let w = find(&r, ring, "torsion-location").and_then(|e| e.witness.clone()).unwrap_or_default();
            ensure(w["preduced"] == json!(false) && w["level"] == json!(0), format!("{ring} n={n}: {w}"))?;
        }
        for ring in ["Z/6", "GF(4)", "GF(2)[x]/(x^2-x)", "product(Z/2,Z/2)"] {
            let w = find(&r, ring, "torsion-location").and_then(|e| e.witness.clone()).unwrap_or_default();
            ensure(w["preduced"] == json!(true) && w["all_at_level"] == json!(n - 1), format!("{ring} n={n}: {w}"))?;
        }
    }
    Ok("zero counterexamples; Z/4, F2[X]/(X^2) level-0 torsion [2], [X]; Z/6, GF(4), F2xF2 torsion at level n-1".into())
}

fn preduced_machinery() -> Outcome {
    let z4 = RingHandle::zmod(4).map_err(|e| e.to_string())?;
    ensure(preduced_ideal(&z4, 2).map_err(|e| e.to_string())? == vec![Elem(0), Elem(2)], "J(Z/4)")?;
    let dual = RingSpec::parse("GF(2)[x]/(x^2)").unwrap().build().unwrap();
    let j: Vec<Value> = preduced_ideal(&dual, 2).map_err(|e| e.to_string())?.iter().map(|&x| dual.payload(x)).collect();
    ensure(j == vec![json!([0, 0]), json!([0, 1])], format!("J(F2[X]/(X^2)) = {j:?}"))?;
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let corpus = default_corpus(p, DEFAULT_SIZE_CAP);
        for name in ["jideal", "preduced-equivalences", "localization", "spectrum"] {
            bad.extend(failures(&suite(name, p, 2, &corpus)));
        }
    }
    ensure(bad.is_empty(), format!("failures: {bad:?}"))?;
    Ok("J(Z/4) = {0,2}, J(F2[X]/(X^2)) = {0,X}; jideal, induction, localization, local factors hold corpus-wide".into())
}

fn delta_suite() -> Outcome {
    let start = Instant::now();
    for p in [2u64, 3] {
        let r = suite("delta-ring", p, 3, &[]);
        ensure(r.passed(), format!("failures: {:?}", failures(&r)))?;
        for level in 1..=3 {
            let ring = format!("Z[X0,X{level}]");
            let g = find(&r, &ring, "generator").and_then(|e| e.witness.clone()).unwrap_or_default();
            ensure(g["delta"] == json!("0"), format!("p={p} {ring}: {g}"))?;
            let lift = find(&r, &ring, "lift").and_then(|e| e.witness.clone()).unwrap_or_default();
            ensure(lift["samples"].as_u64().unwrap_or(0) >= 100, format!("p={p} {ring}: {lift}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("delta(X0 - p^n Xn) = 0 and lift property on 100+ polynomials per level, {:.2?}", elapsed))
}

fn structural_shadows() -> Outcome {
    for q in [2u64, 3, 4, 5, 9] {
        let spec = format!("GF({q})");
        let ring = RingSpec::parse(&spec).unwrap().build().unwrap();
        let p = ring.characteristic();
        let corpus = entries_from_strings(&[&spec]).unwrap();
        for n in 1..=3 {
            let r = suite("local-structure", p, n, &corpus);
            let e = find(&r, &spec, "dvr-shadow").ok_or("missing entry")?;
            ensure(e.status == Status::Pass, format!("{spec} n={n}: {:?} {:?}", e.status, e.witness))?;
        }
    }
    for p in [2u64, 3] {
        let spec = format!("GF({p})[x]/(x^{p}-x)");
        let corpus = entries_from_strings(&[&spec]).unwrap();
        for n in 1..=3u32 {
            let r = suite("local-structure", p, n as usize, &corpus);
            let e = find(&r, &spec, "closing-example").ok_or("missing entry")?;
            let want = json!({
                "idempotents": 1u64 << p,
                "cardinality": p.pow(n * p as u32),
                "order_of_one": p.pow(n),
            });
            ensure(e.status == Status::Pass && e.witness.as_ref() == Some(&want), format!("{spec} n={n}: {:?}", e.witness))?;
        }
    }
    Ok("every nonzero x in W_n(F_q) is a unit times p^k; W_n(F_p[X]/(X^p-X)) has 2^p idempotents, p^(np) elements, 1 of order p^n".into())
}

fn ghost_bijection() -> Outcome {
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let corpus = default_corpus(p, DEFAULT_SIZE_CAP);
        for n in [2usize, 3] {
            for name in ["ghost-bijection", "characteristic"] {
                let r = suite(name, p, n, &corpus);
                bad.extend(failures(&r));
                let skipped_in_cap = r.results.iter().filter(|e| e.status == Status::Skip && within_cap(&e.ring, n));
                bad.extend(skipped_in_cap.map(|e| format!("{} skipped at n={n}", e.ring)));
            }
        }
    }
    ensure(bad.is_empty(), format!("{bad:?}"))?;
    Ok("ghost bijective exactly when gcd(char R, p) = 1; then order_of_one = char R".into())
}

fn reduced_shadow() -> Outcome {
    let (mut with_head, mut reduced) = (0, 0);
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let corpus = default_corpus(p, DEFAULT_SIZE_CAP);
        for n in [2usize, 3] {
            let r = suite("reduced-shadow", p, n, &corpus);
            bad.extend(failures(&r));
            for e in &r.results {
                let w = e.witness.clone().unwrap_or_default();
                if w["reduced"] == json!(true) {
                    reduced += 1;
                } else if w.get("nilpotent_with_nonzero_head").is_some() && w.get("teichmuller_witness").is_some() {
                    with_head += 1;
                } else if e.status != Status::Skip {
                    bad.push(format!("{}: non-reduced without witnesses", e.ring));
                }
            }
        }
    }
    ensure(bad.is_empty(), format!("{bad:?}"))?;
    Ok(format!("{reduced} reduced entries with nilpotents in V(W); {with_head} non-reduced entries witnessed by [r]"))
}

/// Independent of the suite: closes `W_3(Z/4) · V([2])` under addition.
fn noetherian_enumeration() -> Outcome {
    let z4 = RingHandle::zmod(4).map_err(|e| e.to_string())?;
    let w = WittRing::new(&z4, 2, 3).map_err(|e| e.to_string())?;
    let g = w.verschiebung(&w.teichmuller(Elem(2))).map_err(|e| e.to_string())?;
    let mut ideal: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut members = Vec::new();
    for a in w.elements().map_err(|e| e.to_string())? {
        let x = w.mul(&a, &g).map_err(|e| e.to_string())?;
        if ideal.insert(x.coords().iter().map(|c| c.0).collect()) {
            members.push(x);
        }
    }
    let mut i = 0;
    while i < members.len() {
        for j in 0..=i {
            let s = w.add(&members[i], &members[j]).map_err(|e| e.to_string())?;
            if ideal.insert(s.coords().iter().map(|c| c.0).collect()) {
                members.push(s);
            }
        }
        i += 1;
    }
    let allowed: BTreeSet<Vec<u32>> = (0..4).map(|r| vec![0, r, 0]).collect();
    let outside: Vec<_> = ideal.difference(&allowed).collect();
    ensure(outside.is_empty(), format!("outside: {outside:?}"))?;
    let r = suite("noetherian-lemma", 2, 3, &entries_from_strings(&["Z/4"]).unwrap());
    ensure(r.passed() && r.summary.pass == 1, "suite entry did not pass")?;
    Ok(format!("ideal of V([2]) in W_3(Z/4) has {} elements, all of the form V([r])", ideal.len()))
}

fn cli() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_witt-lab"))
            .args(args)
            .env("WITT_LAB_CACHE", dir.path())
            .output()
            .expect("binary runs")
    };
    for (p, n) in [("2", "2"), ("2", "3"), ("3", "2"), ("3", "3")] {
        let o = run(&["verify", "--suite", "all", "--p", p, "--n", n, "--json"]);
        ensure(o.status.code() == Some(0), format!("verify all p={p} n={n} exited {:?}", o.status.code()))?;
    }
    let report = dir.path().join("fault.json");
    let path = report.to_str().unwrap();
    let o = run(&["verify", "--suite", "all", "--p", "2", "--n", "2", "--json", "--out", path, "--inject-fault", "7"]);
    ensure(o.status.code() == Some(1), format!("faulty verify exited {:?}", o.status.code()))?;
    let o = run(&["replay", path]);
    let out = String::from_utf8_lossy(&o.stdout).to_string();
    ensure(o.status.code() == Some(1), format!("replay exited {:?}", o.status.code()))?;
    let last = out.lines().last().unwrap_or_default().to_string();
    ensure(!out.contains("NOT reproduced"), last.clone())?;
    Ok(format!("verify over all suites exits 0 at p in {{2,3}}, n in {{2,3}}; fault build exits 1; replay: {last}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "table generation", table_generation),
        (2, "small polynomial oracles", small_oracles),
        (3, "identity suites", identity_suites),
        (4, "char-p suite", charp_suite),
        (5, "torsion location", torsion_location),
        (6, "preduced machinery", preduced_machinery),
        (7, "delta-ring suite", delta_suite),
        (8, "structural shadows", structural_shadows),
        (9, "ghost bijection and characteristic", ghost_bijection),
        (10, "reduced shadow", reduced_shadow),
        (11, "noetherian-lemma enumeration", noetherian_enumeration),
        (12, "CLI", cli),
    ];
    let mut unexpected = Vec::new();
    for (id, title, check) in criteria {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        match check() {
            Ok(detail) => println!("criterion {id:>2} PASS  {title}: {detail}"),
            Err(detail) => {
                println!("criterion {id:>2} FAIL  {title}: {detail}");
                match known {
                    Some(why) => println!("             known: {why}"),
                    None => unexpected.push(id),
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
