//! The default list of test rings and corpus files.

use std::path::Path;

use crate::spec::{format_poly, RingSpec, SpecError};

/// Default bound on `|R|` for corpus members.
pub const DEFAULT_SIZE_CAP: u64 = 256;

/// A parsed corpus member together with its source string.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub source: String,
    pub spec: RingSpec,
}

fn monic_polys(l: u64, degree: u32) -> Vec<Vec<i64>> {
    (0..l.pow(degree))
        .map(|code| {
            let mut f: Vec<i64> = (0..degree)
                .map(|i| (code / l.pow(i) % l) as i64)
                .collect();
            f.push(1);
            f
        })
        .collect()
}

/// Candidate ring specs in a fixed order, before the size filter.
fn candidates(p: u64) -> Vec<String> {
    let mut out: Vec<String> = (1..=16).map(|m| format!("Z/{m}")).collect();
    out.extend([2, 3, 4, 5, 8, 9].iter().map(|q| format!("GF({q})")));
    for l in [2, 3] {
        for degree in [1, 2] {
            let mut polys = monic_polys(l, degree);
            polys.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
            for f in polys {
                out.push(format!("GF({l})[x]/({})", format_poly(&f, "x")));
            }
        }
    }
    out.push(format!("Z/{}", p * p));
    out.push(format!("Z/{}[x]/(x^2)", p * p));
    let small = ["Z/2", "Z/3", "Z/4", "GF(4)"];
    for i in 0..small.len() {
        for j in i..small.len() {
            out.push(format!("product({},{})", small[i], small[j]));
        }
    }
    out.push(format!("GF({p})[x]/(x^{p}-x)"));
    out
}

/// Deterministic corpus for the prime `p`: every member has `|R| <= size_cap`.
pub fn default_corpus(p: u64, size_cap: u64) -> Vec<CorpusEntry> {
    let mut seen = std::collections::HashSet::new();
    candidates(p)
        .into_iter()
        .filter(|s| seen.insert(s.clone()))
        .filter_map(|source| {
            let spec = RingSpec::parse(&source).expect("corpus specs parse");
            let ring = spec.build().ok()?;
            (ring.order() <= size_cap).then_some(CorpusEntry { source, spec })
        })
        .collect()
}

/// One spec per line; blank lines and `#` comments are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, (usize, SpecError)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| {
            let spec = RingSpec::parse(line).map_err(|e| (i, e))?;
            spec.build().map_err(|e| (i, e))?;
            Ok(CorpusEntry {
                source: line.to_string(),
                spec,
            })
        })
        .collect()
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_corpus(&text).map_err(|(line, e)| format!("{}:{line}: {e}", path.display()))
}

pub fn entries_from_strings(specs: &[&str]) -> Result<Vec<CorpusEntry>, SpecError> {
    specs
        .iter()
        .map(|&s| {
            let spec = RingSpec::parse(s)?;
            spec.build()?;
            Ok(CorpusEntry {
                source: s.to_string(),
                spec,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_contents() {
        let c = default_corpus(2, DEFAULT_SIZE_CAP);
        let names: Vec<&str> = c.iter().map(|e| e.source.as_str()).collect();
        for want in ["Z/4", "GF(2)[x]/(x^2+x)", "GF(2)[x]/(x^2-x)", "Z/4[x]/(x^2)", "GF(8)"] {
            assert!(names.contains(&want), "{want}");
        }
        assert!(c.iter().all(|e| e.spec.build().unwrap().order() <= DEFAULT_SIZE_CAP));
        let small = default_corpus(2, 8);
        assert!(small.iter().all(|e| e.spec.build().unwrap().order() <= 8));
        assert_eq!(default_corpus(3, 256).iter().filter(|e| e.source == "GF(3)[x]/(x^3-x)").count(), 1);
    }

    #[test]
    fn corpus_file() {
        let c = parse_corpus("Z/4 # comment\n\nGF(4)\n").unwrap();
        assert_eq!(c.len(), 2);
        assert!(matches!(parse_corpus("Z/4\nQ/3"), Err((2, _))));
    }
}
