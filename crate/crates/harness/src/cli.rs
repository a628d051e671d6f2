//! The `witt-lab` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use witt_core::arith::is_prime;
use witt_core::predicates::{self, Flags};
use witt_core::witt_poly::{self, TableCache, WittPolyTable};

use crate::corpus::{default_corpus, load_corpus, DEFAULT_SIZE_CAP};
use crate::report::{emit_reports, Format, SuiteReport};
use crate::spec::RingSpec;
use crate::suite::{replay, run_suite, RunOptions, SUITES};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
/// `replay` only: some recorded failure did not reproduce.
pub const EXIT_NOT_REPRODUCED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "witt-lab", version, about = "Exact experiments with truncated p-typical Witt vectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct PrimeArg {
    /// The prime p.
    #[arg(long, value_parser = parse_prime)]
    pub p: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide the ring properties of a finite ring, with witnesses.
    Classify {
        spec: String,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite (or all of them) over a corpus of rings.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        prime: PrimeArg,
        /// Truncation length.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// File with one ring spec per line; defaults to the built-in corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Bound on |R| for the built-in corpus.
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Perturb one coefficient of the structure table, chosen by this seed.
        #[arg(long, hide = true)]
        inject_fault: Option<u64>,
    },
    /// Generate, verify and save the structure polynomial table.
    Table {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the preduced ideal and quotient.
    Jideal {
        spec: String,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        json: bool,
    },
    /// Re-run every failure recorded in a JSON report.
    Replay { report: PathBuf },
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

/// Directory of the on-disk table cache.
pub fn cache_dir() -> PathBuf {
    std::env::var_os("WITT_LAB_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("witt-lab-cache"))
}

/// Loads (or generates and stores) the table for `(p, n)` and makes it the
/// in-process table.
fn prepare_table(p: u64, n: usize) -> Result<(), String> {
    let table = TableCache::new(cache_dir())
        .load_or_generate(p, n)
        .map_err(|e| format!("table for p={p}, n={n}: {e}"))?;
    witt_poly::install(table);
    Ok(())
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("witt-lab: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn failure(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("witt-lab: {msg}");
    ExitCode::from(EXIT_FAIL)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn parse_spec(spec: &str) -> Result<(RingSpec, witt_core::RingHandle), ExitCode> {
    let parsed = RingSpec::parse(spec).map_err(|e| usage(format!("'{spec}': {e}")))?;
    let ring = parsed.build().map_err(|e| usage(format!("'{spec}': {e}")))?;
    Ok((parsed, ring))
}

fn render_flags(report: &predicates::PropertyReport) -> String {
    let mut out = format!(
        "{} (order {}, characteristic {}), p = {}\n",
        report.spec,
        report.ring.order(),
        report.characteristic,
        report.p
    );
    for name in Flags::NAMES {
        let value = report.flags.get(name).unwrap_or(false);
        let mut line = format!("  {name:<12} {}", if value { "yes" } else { "no" });
        if let Some(&w) = report.witnesses.get(name) {
            line.push_str(&format!("  witness {}", report.ring.format(w)));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("  lattice: field => domain => reduced => preduced; perfect => semiperfect\n");
    out
}

fn classify(spec: &str, p: u64, json: bool) -> ExitCode {
    let (parsed, ring) = match parse_spec(spec) {
        Ok(r) => r,
        Err(code) => return code,
    };
    match predicates::classify(&ring, p, &parsed.to_string()) {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            } else {
                print!("{}", render_flags(&report));
            }
            ExitCode::from(EXIT_PASS)
        }
        Err(e) => failure(e),
    }
}

fn jideal(spec: &str, p: u64, json: bool) -> ExitCode {
    let (parsed, ring) = match parse_spec(spec) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let result = predicates::preduced_ideal(&ring, p).and_then(|ideal| {
        let (quotient, _) = predicates::preduced_quotient(&ring, p)?;
        Ok((ideal, quotient))
    });
    let (ideal, quotient) = match result {
        Ok(r) => r,
        Err(e) => return failure(e),
    };
    if json {
        let value = serde_json::json!({
            "ring": parsed.to_string(),
            "p": p,
            "ideal": ideal.iter().map(|&x| ring.payload(x)).collect::<Vec<_>>(),
            "ideal_elements": ideal.iter().map(|&x| ring.format(x)).collect::<Vec<_>>(),
            "quotient_order": quotient.order(),
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        let shown: Vec<String> = ideal.iter().map(|&x| ring.format(x)).collect();
        println!("J({parsed}) = {{{}}}", shown.join(", "));
        println!("|R/J| = {}", quotient.order());
    }
    ExitCode::from(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    p: u64,
    n: usize,
    corpus: Option<&Path>,
    size_cap: u64,
    seed: u64,
    format: Format,
    out: Option<&Path>,
    fault: Option<u64>,
) -> ExitCode {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return usage(format!("unknown suite '{suite}' (one of: all, {})", SUITES.join(", ")));
    };
    let entries = match corpus {
        Some(path) => match load_corpus(path) {
            Ok(c) => c,
            Err(e) => return usage(e),
        },
        None => default_corpus(p, size_cap),
    };
    let needs_table = names.iter().any(|&s| s != "delta-ring");
    if needs_table {
        if let Err(e) = prepare_table(p, n) {
            return usage(e);
        }
    }
    let opts = RunOptions { seed, fault_seed: fault };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        match run_suite(name, p, n, &entries, &opts) {
            Ok(r) => reports.push(r),
            Err(e) => return usage(e),
        }
    }
    if let Err(e) = write_output(out, &emit_reports(&reports, format)) {
        return failure(e);
    }
    if reports.iter().all(SuiteReport::passed) {
        ExitCode::from(EXIT_PASS)
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn table(p: u64, n: usize, out: &Path) -> ExitCode {
    let t = match WittPolyTable::generate(p, n) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    if let Err(e) = t.verify().and_then(|_| t.save(out)) {
        return failure(e);
    }
    let terms: usize = t.sum().iter().chain(t.prod()).map(|f| f.num_terms()).sum();
    println!("wrote {} (p={p}, n={n}, {terms} sum and product terms, verified)", out.display());
    ExitCode::from(EXIT_PASS)
}

fn read_reports(path: &Path) -> Result<Vec<SuiteReport>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|r| vec![r])
    };
    parsed.map_err(|e| format!("{}: not a suite report: {e}", path.display()))
}

fn replay_reports(path: &Path) -> ExitCode {
    let reports = match read_reports(path) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let mut total = 0usize;
    let mut reproduced = 0usize;
    for report in &reports {
        if report.failures().next().is_none() {
            continue;
        }
        if report.suite != "delta-ring" {
            if let Err(e) = prepare_table(report.p, report.n) {
                return usage(e);
            }
        }
        let replays = match replay(report) {
            Ok(r) => r,
            Err(e) => return usage(e),
        };
        for r in replays {
            total += 1;
            reproduced += r.reproduced as usize;
            let status = if r.reproduced { "reproduced" } else { "NOT reproduced" };
            println!("{} {} {}: {status} ({})", report.suite, r.ring, r.check, r.detail);
        }
    }
    println!("{reproduced} of {total} recorded failures reproduced");
    if total == 0 {
        ExitCode::from(EXIT_PASS)
    } else if reproduced == total {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::from(EXIT_NOT_REPRODUCED)
    }
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Classify { spec, prime, json } => classify(&spec, prime.p, json),
        Command::Jideal { spec, prime, json } => jideal(&spec, prime.p, json),
        Command::Verify {
            suite,
            prime,
            n,
            corpus,
            size_cap,
            seed,
            json,
            csv,
            out,
            inject_fault,
        } => {
            let format = if json {
                Format::Json
            } else if csv {
                Format::Csv
            } else {
                Format::Text
            };
            verify(&suite, prime.p, n as usize, corpus.as_deref(), size_cap, seed, format, out.as_deref(), inject_fault)
        }
        Command::Table { prime, n, out } => table(prime.p, n, &out),
        Command::Replay { report } => replay_reports(&report),
    }
}

/// Parses `std::env::args` and runs; clap usage errors exit with code 2.
pub fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
