//! Suite reports and their JSON, CSV and text renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// How an identity check covered its domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub ring: String,
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub ring: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_seed: Option<u64>,
    pub corpus: Vec<String>,
    pub results: Vec<ResultEntry>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

impl SuiteReport {
    pub fn recount(&mut self) {
        let mut s = Summary::default();
        for r in &self.results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skip => s.skip += 1,
            }
        }
        self.summary = s;
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResultEntry> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Renders one or more reports. Several reports render as a JSON array, one CSV
/// table, or consecutive text blocks.
pub fn emit_reports(reports: &[SuiteReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            }
            .expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "p", "n", "ring", "check", "status", "coverage", "cases", "detail"])
                .expect("in-memory csv");
            for r in reports {
                for e in &r.results {
                    let coverage = match e.coverage {
                        Some(Coverage::Exhaustive) => "exhaustive",
                        Some(Coverage::Sampled) => "sampled",
                        None => "",
                    };
                    let detail = match (&e.reason, &e.witness) {
                        (Some(reason), _) => reason.clone(),
                        (None, Some(w)) => w.to_string(),
                        (None, None) => String::new(),
                    };
                    w.write_record([
                        r.suite.as_str(),
                        &r.p.to_string(),
                        &r.n.to_string(),
                        &e.ring,
                        &e.check,
                        e.status.as_str(),
                        coverage,
                        &e.cases.map(|c| c.to_string()).unwrap_or_default(),
                        &detail,
                    ])
                    .expect("in-memory csv");
                }
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Text => reports.iter().map(render_text).collect::<Vec<_>>().join("\n"),
    }
}

fn render_text(r: &SuiteReport) -> String {
    let mut out = format!("suite {} (p={}, n={}, seed={})", r.suite, r.p, r.n, r.seed);
    if let Some(f) = r.fault_seed {
        out.push_str(&format!(" fault-seed={f}"));
    }
    out.push('\n');
    let width = r.results.iter().map(|e| e.ring.len()).max().unwrap_or(4);
    let mut ring = "";
    for e in &r.results {
        let name = if e.ring == ring { "" } else { e.ring.as_str() };
        ring = &e.ring;
        let mut line = format!("  {name:width$}  {:<28} {}", e.check, e.status.as_str().to_uppercase());
        if let Some(c) = e.cases {
            let how = if e.coverage == Some(Coverage::Sampled) { "sampled" } else { "exhaustive" };
            line.push_str(&format!("  [{c} cases, {how}]"));
        }
        if let Some(reason) = &e.reason {
            line.push_str(&format!("  ({reason})"));
        }
        if e.status == Status::Fail {
            if let Some(w) = &e.witness {
                line.push_str(&format!("\n      counterexample: {w}"));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    for o in &r.observations {
        out.push_str(&format!("  observation {}: {}\n", o.ring, o.note));
    }
    out.push_str(&format!(
        "  summary: {} pass, {} fail, {} skip\n",
        r.summary.pass, r.summary.fail, r.summary.skip
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SuiteReport {
        let mut r = SuiteReport {
            suite: "jideal".into(),
            p: 2,
            n: 2,
            seed: 0,
            fault_seed: None,
            corpus: vec!["Z/4".into()],
            results: vec![
                ResultEntry {
                    ring: "Z/4".into(),
                    check: "ideal".into(),
                    status: Status::Pass,
                    witness: Some(serde_json::json!({"ideal": [0, 2]})),
                    coverage: None,
                    cases: None,
                    reason: None,
                },
                ResultEntry {
                    ring: "Z/4".into(),
                    check: "other".into(),
                    status: Status::Skip,
                    witness: None,
                    coverage: None,
                    cases: None,
                    reason: Some("not applicable".into()),
                },
            ],
            summary: Summary::default(),
            observations: vec![],
        };
        r.recount();
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = emit_reports(std::slice::from_ref(&r), Format::Json);
        let back: SuiteReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.summary, Summary { pass: 1, fail: 0, skip: 1 });
    }

    #[test]
    fn csv_rows() {
        let text = emit_reports(&[sample()], Format::Csv);
        assert_eq!(text.lines().count(), 1 + 2);
    }
}
