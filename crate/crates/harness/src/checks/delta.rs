//! The delta-ring suite: the Frobenius lift on `Z[X0, Xn]` for `n = 1, 2, 3`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use witt_core::delta::{verify_lift, FrobeniusLift};

use crate::report::{ResultEntry, Status, SuiteReport};
use crate::suite::RunOptions;

pub const LEVELS: [usize; 3] = [1, 2, 3];

/// Random pairs used for the addition and product laws of `delta`.
pub const LAW_PAIRS: usize = 20;

fn result(ring: &str, check: &str, status: Status, witness: serde_json::Value) -> ResultEntry {
    ResultEntry {
        ring: ring.to_string(),
        check: check.to_string(),
        status,
        witness: Some(witness),
        coverage: None,
        cases: None,
        reason: None,
    }
}

fn level_results(p: u64, level: usize, seed: u64) -> Vec<ResultEntry> {
    let ring = format!("Z[X0,X{level}]");
    let lift = match FrobeniusLift::new(p, level) {
        Ok(l) => l,
        Err(e) => return vec![result(&ring, "lift", Status::Fail, json!({ "detail": e.to_string() }))],
    };
    let report = verify_lift(&lift, seed);
    let mut out = Vec::new();
    for check in ["lift", "integral", "generator"] {
        let failure = report.failures.iter().find(|f| f.check == check);
        out.push(match failure {
            Some(f) => result(&ring, check, Status::Fail, json!({ "input": f.input, "detail": f.detail })),
            None if check == "generator" => result(
                &ring,
                check,
                Status::Pass,
                json!({ "generator": lift.generator().to_string(), "delta": report.generator_delta }),
            ),
            None => result(&ring, check, Status::Pass, json!({ "samples": report.samples })),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let pairs: Vec<_> = (0..LAW_PAIRS)
        .map(|_| (lift.random_polynomial(&mut rng, 3), lift.random_polynomial(&mut rng, 3)))
        .collect();
    type Law = fn(&FrobeniusLift, &witt_core::IntPolynomial, &witt_core::IntPolynomial) -> witt_core::Result<bool>;
    let laws: [(&str, Law); 2] = [
        ("addition-law", FrobeniusLift::addition_law_holds),
        ("product-law", FrobeniusLift::product_law_holds),
    ];
    for (name, law) in laws {
        let bad = pairs.iter().find(|(g, h)| !matches!(law(&lift, g, h), Ok(true)));
        out.push(match bad {
            Some((g, h)) => result(&ring, name, Status::Fail, json!({ "inputs": [g.to_string(), h.to_string()] })),
            None => result(&ring, name, Status::Pass, json!({ "pairs": LAW_PAIRS })),
        });
    }
    out
}

pub fn run(p: u64, n: usize, opts: &RunOptions) -> SuiteReport {
    let results = LEVELS
        .iter()
        .flat_map(|&level| level_results(p, level, opts.seed.wrapping_add(level as u64)))
        .collect();
    let mut report = SuiteReport {
        suite: "delta-ring".to_string(),
        p,
        n,
        seed: opts.seed,
        fault_seed: opts.fault_seed,
        corpus: LEVELS.iter().map(|l| format!("Z[X0,X{l}]")).collect(),
        results,
        summary: Default::default(),
        observations: Vec::new(),
    };
    report.recount();
    report
}
