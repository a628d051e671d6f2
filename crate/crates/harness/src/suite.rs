//! Suite orchestration: identity checks over Witt vectors, whole-ring checks,
//! fault injection and counterexample replay.

use std::cell::OnceCell;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use witt_core::witt::WITT_ENUMERATION_CAP;
use witt_core::witt_poly::{self, TableKind, WittPolyTable};
use witt_core::{Elem, RingHandle, WittRing, WittVector};

use crate::checks;
use crate::corpus::CorpusEntry;
use crate::report::{Coverage, Observation, ResultEntry, Status, SuiteReport};
use crate::spec::RingSpec;

/// Identity checks run over every argument tuple when there are at most this many.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 16;

/// Number of random tuples drawn when the budget is exceeded.
pub const SAMPLES: u64 = 10_000;

pub const SUITES: [&str; 14] = [
    "ghost-hom",
    "fv-identities",
    "charp-identities",
    "torsion-location",
    "reduced-shadow",
    "preduced-equivalences",
    "jideal",
    "localization",
    "spectrum",
    "delta-ring",
    "noetherian-lemma",
    "local-structure",
    "ghost-bijection",
    "characteristic",
];

/// Kind of one identity argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arg {
    /// Any vector of `W_n(R)`.
    Witt,
    /// A Teichmüller vector `[r]`, ranging over `r` in `R`.
    Teich,
}

/// A recorded disagreement between two sides of an identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub expected: Value,
    pub got: Value,
    pub detail: String,
}

pub type Eval = fn(&Ctx, &[WittVector]) -> witt_core::Result<Option<Mismatch>>;

pub struct Identity {
    pub name: &'static str,
    pub args: &'static [Arg],
    /// Reason to skip on this ring, if any.
    pub applies: fn(&Ctx) -> Option<String>,
    pub eval: Eval,
}

pub enum Outcome {
    Pass(Option<Value>),
    Fail(Value),
    Skip(String),
}

pub struct RingCheck {
    pub name: &'static str,
    pub run: fn(&Ctx) -> witt_core::Result<Outcome>,
}

pub enum Check {
    Identity(Identity),
    Ring(RingCheck),
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Identity(i) => i.name,
            Check::Ring(r) => r.name,
        }
    }
}

/// Everything a check may need about one corpus ring at one `(p, n)`.
pub struct Ctx {
    pub source: String,
    pub ring: RingHandle,
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    table: Arc<WittPolyTable>,
    witt: OnceCell<WittRing>,
    preduced: OnceCell<bool>,
    pub observations: std::cell::RefCell<Vec<Observation>>,
}

impl Ctx {
    pub fn new(source: &str, ring: RingHandle, p: u64, n: usize, seed: u64, table: Arc<WittPolyTable>) -> Self {
        Ctx {
            source: source.to_string(),
            ring,
            p,
            n,
            seed,
            table,
            witt: OnceCell::new(),
            preduced: OnceCell::new(),
            observations: Default::default(),
        }
    }

    /// `W_n(R)` built from this run's table.
    pub fn witt(&self) -> &WittRing {
        self.witt.get_or_init(|| {
            WittRing::with_table(&self.ring, self.n, self.table.clone()).expect("table long enough")
        })
    }

    pub fn preduced(&self) -> bool {
        *self
            .preduced
            .get_or_init(|| witt_core::predicates::is_preduced(&self.ring, self.p).map(|r| r.0).unwrap_or(false))
    }

    pub fn char_p(&self) -> bool {
        self.ring.characteristic() == self.p
    }

    pub fn witt_within_cap(&self) -> Option<String> {
        let order = self.witt().cardinality();
        (order > WITT_ENUMERATION_CAP).then(|| {
            format!("|W_n(R)| = {order} exceeds enumeration cap {WITT_ENUMERATION_CAP}")
        })
    }

    pub fn observe(&self, note: String) {
        self.observations.borrow_mut().push(Observation {
            ring: self.source.clone(),
            note,
        });
    }
}

/// Seed for the sampler of one (ring, check), derived from the run seed.
fn sample_seed(seed: u64, ring: &str, check: &str) -> u64 {
    let digest = Sha256::digest(format!("{seed}/{ring}/{check}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

fn entry(ctx: &Ctx, check: &str, status: Status) -> ResultEntry {
    ResultEntry {
        ring: ctx.source.clone(),
        check: check.to_string(),
        status,
        witness: None,
        coverage: None,
        cases: None,
        reason: None,
    }
}

fn args_vectors(ctx: &Ctx, args: &[Arg], idx: &[u64]) -> Vec<WittVector> {
    let w = ctx.witt();
    args.iter()
        .zip(idx)
        .map(|(a, &i)| match a {
            Arg::Witt => w.element_at(i),
            Arg::Teich => w.teichmuller(Elem(i as u32)),
        })
        .collect()
}

fn failure_witness(ctx: &Ctx, inputs: &[WittVector], m: &Mismatch) -> Value {
    let w = ctx.witt();
    json!({
        "inputs": inputs.iter().map(|x| w.payload(x)).collect::<Vec<_>>(),
        "expected": m.expected,
        "got": m.got,
        "detail": m.detail,
    })
}

pub fn run_identity(ctx: &Ctx, id: &Identity) -> ResultEntry {
    if let Some(reason) = ctx.witt_within_cap().or_else(|| (id.applies)(ctx)) {
        let mut e = entry(ctx, id.name, Status::Skip);
        e.reason = Some(reason);
        return e;
    }
    let sizes: Vec<u64> = id
        .args
        .iter()
        .map(|a| match a {
            Arg::Witt => ctx.witt().cardinality(),
            Arg::Teich => ctx.ring.order(),
        })
        .collect();
    let total = sizes.iter().fold(1u64, |acc, &s| acc.saturating_mul(s));
    let exhaustive = total <= EXHAUSTIVE_BUDGET;
    let cases = if exhaustive { total } else { SAMPLES };
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(ctx.seed, &ctx.source, id.name));
    let mut idx = vec![0u64; sizes.len()];
    for case in 0..cases {
        if exhaustive {
            let mut rest = case;
            for (slot, &s) in idx.iter_mut().zip(&sizes).rev() {
                *slot = rest % s;
                rest /= s;
            }
        } else {
            for (slot, &s) in idx.iter_mut().zip(&sizes) {
                *slot = rng.gen_range(0..s);
            }
        }
        let inputs = args_vectors(ctx, id.args, &idx);
        let result = (id.eval)(ctx, &inputs);
        let mismatch = match result {
            Ok(None) => continue,
            Ok(Some(m)) => m,
            Err(e) => Mismatch {
                expected: Value::Null,
                got: Value::Null,
                detail: format!("error: {e}"),
            },
        };
        let mut e = entry(ctx, id.name, Status::Fail);
        e.witness = Some(failure_witness(ctx, &inputs, &mismatch));
        e.coverage = Some(if exhaustive { Coverage::Exhaustive } else { Coverage::Sampled });
        e.cases = Some(case + 1);
        return e;
    }
    let mut e = entry(ctx, id.name, Status::Pass);
    e.coverage = Some(if exhaustive { Coverage::Exhaustive } else { Coverage::Sampled });
    e.cases = Some(cases);
    e
}

pub fn run_ring_check(ctx: &Ctx, check: &RingCheck) -> ResultEntry {
    match (check.run)(ctx) {
        Ok(Outcome::Pass(w)) => {
            let mut e = entry(ctx, check.name, Status::Pass);
            e.witness = w;
            e
        }
        Ok(Outcome::Fail(w)) => {
            let mut e = entry(ctx, check.name, Status::Fail);
            e.witness = Some(w);
            e
        }
        Ok(Outcome::Skip(reason)) => {
            let mut e = entry(ctx, check.name, Status::Skip);
            e.reason = Some(reason);
            e
        }
        Err(err) => {
            let mut e = entry(ctx, check.name, Status::Fail);
            e.witness = Some(json!({ "detail": format!("error: {err}") }));
            e
        }
    }
}

pub fn run_check(ctx: &Ctx, check: &Check) -> ResultEntry {
    match check {
        Check::Identity(id) => run_identity(ctx, id),
        Check::Ring(rc) => run_ring_check(ctx, rc),
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("{0}")]
    Core(#[from] witt_core::Error),
    #[error("ring {ring}: {message}")]
    Ring { ring: String, message: String },
}

/// Options shared by every suite run.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Perturb one structure-table coefficient, chosen from this seed.
    pub fault_seed: Option<u64>,
}


/// The table used by a run: the verified table for `(p, n)`, perturbed when a
/// fault is requested. The perturbation adds 1 to one coefficient of the
/// highest sum polynomial, picked by the fault seed.
pub fn run_table(p: u64, n: usize, fault_seed: Option<u64>) -> Result<Arc<WittPolyTable>, SuiteError> {
    let table = witt_poly::table(p, n)?;
    let table = Arc::new(table.truncated(n)?);
    Ok(match fault_seed {
        None => table,
        Some(s) => {
            let index = n - 1;
            let terms = table.sum()[index].num_terms() as u64;
            let term = (s % terms.max(1)) as usize;
            Arc::new(table.with_perturbed_coefficient(TableKind::Sum, index, term, 1))
        }
    })
}

pub fn suite_checks(name: &str) -> Result<Vec<Check>, SuiteError> {
    checks::for_suite(name).ok_or_else(|| SuiteError::UnknownSuite(name.to_string()))
}

/// Runs one suite over the corpus. The delta-ring suite ignores the corpus and
/// runs over its own grid of levels.
pub fn run_suite(
    name: &str,
    p: u64,
    n: usize,
    corpus: &[CorpusEntry],
    opts: &RunOptions,
) -> Result<SuiteReport, SuiteError> {
    if name == "delta-ring" {
        return Ok(checks::delta::run(p, n, opts));
    }
    let suite = suite_checks(name)?;
    let table = run_table(p, n, opts.fault_seed)?;
    let mut results = Vec::new();
    let mut observations = Vec::new();
    for e in corpus {
        let ring = e.spec.build().map_err(|err| SuiteError::Ring {
            ring: e.source.clone(),
            message: err.to_string(),
        })?;
        let ctx = Ctx::new(&e.source, ring, p, n, opts.seed, table.clone());
        for check in &suite {
            results.push(run_check(&ctx, check));
        }
        observations.extend(ctx.observations.into_inner());
    }
    let mut report = SuiteReport {
        suite: name.to_string(),
        p,
        n,
        seed: opts.seed,
        fault_seed: opts.fault_seed,
        corpus: corpus.iter().map(|e| e.source.clone()).collect(),
        results,
        summary: Default::default(),
        observations,
    };
    report.recount();
    Ok(report)
}

/// Result of replaying one recorded failure.
#[derive(Clone, Debug, PartialEq)]
pub struct Replay {
    pub ring: String,
    pub check: String,
    pub reproduced: bool,
    pub detail: String,
}

/// Re-runs every failure of `report` through the library. Identity failures are
/// re-evaluated on their recorded inputs; ring-level failures are re-run and
/// compared with the recorded witness.
pub fn replay(report: &SuiteReport) -> Result<Vec<Replay>, SuiteError> {
    let mut out = Vec::new();
    let opts = RunOptions {
        seed: report.seed,
        fault_seed: report.fault_seed,
    };
    for failure in report.failures() {
        let record = |reproduced: bool, detail: String| Replay {
            ring: failure.ring.clone(),
            check: failure.check.clone(),
            reproduced,
            detail,
        };
        if report.suite == "delta-ring" {
            let again = checks::delta::run(report.p, report.n, &opts);
            let same = again
                .results
                .iter()
                .any(|r| r.ring == failure.ring && r.check == failure.check && r.witness == failure.witness);
            out.push(record(same, "re-ran grid point".into()));
            continue;
        }
        let spec = RingSpec::parse(&failure.ring).map_err(|e| SuiteError::Ring {
            ring: failure.ring.clone(),
            message: e.to_string(),
        })?;
        let ring = spec.build().map_err(|e| SuiteError::Ring {
            ring: failure.ring.clone(),
            message: e.to_string(),
        })?;
        let table = run_table(report.p, report.n, report.fault_seed)?;
        let ctx = Ctx::new(&failure.ring, ring, report.p, report.n, report.seed, table);
        let checks = suite_checks(&report.suite)?;
        let Some(check) = checks.iter().find(|c| c.name() == failure.check) else {
            out.push(record(false, "check no longer exists".into()));
            continue;
        };
        match check {
            Check::Identity(id) => {
                let w = ctx.witt();
                let witness = failure.witness.clone().unwrap_or(Value::Null);
                let inputs: Option<Vec<WittVector>> = witness["inputs"]
                    .as_array()
                    .map(|a| a.iter().map(|v| w.from_payload(v)).collect::<Option<Vec<_>>>())
                    .unwrap_or(None);
                let Some(inputs) = inputs else {
                    out.push(record(false, "recorded inputs do not parse".into()));
                    continue;
                };
                match (id.eval)(&ctx, &inputs) {
                    Ok(Some(m)) => {
                        let same = m.got == witness["got"] && m.expected == witness["expected"];
                        out.push(record(same, format!("expected {} got {}", m.expected, m.got)));
                    }
                    Ok(None) => out.push(record(false, "identity holds on recorded inputs".into())),
                    Err(e) => out.push(record(
                        witness["detail"] == format!("error: {e}"),
                        format!("error: {e}"),
                    )),
                }
            }
            Check::Ring(rc) => {
                let again = run_ring_check(&ctx, rc);
                let same = again.status == Status::Fail && again.witness == failure.witness;
                out.push(record(same, "re-ran ring check".into()));
            }
        }
    }
    Ok(out)
}
