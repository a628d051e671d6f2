//! Universal structure polynomials of truncated p-typical Witt vectors.
//!
//! Every table is produced by the ghost-component recursion: given the ghost
//! images `G_i` an operation must have, the coordinate polynomials are
//! `Q_i = (G_i - sum_{j<i} p^j Q_j^(p^(i-j))) / p^i`, each division exact.
//! Variables are `X0..X{n-1}` and `Y0..Y{n-1}`.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, SerialPoly};

pub fn x_var(i: usize) -> String {
    format!("X{i}")
}

pub fn y_var(i: usize) -> String {
    format!("Y{i}")
}

/// Largest supported truncation length for `p` in the default grid.
pub fn default_max_length(p: u64) -> Option<usize> {
    match p {
        2 => Some(5),
        3 => Some(4),
        5 => Some(3),
        _ => None,
    }
}

fn big_pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// `w_i = sum_{j<=i} p^j V_j^(p^(i-j))` in the variables `prefix0..prefix{i}`.
pub fn ghost_in(p: u64, i: usize, var: impl Fn(usize) -> String) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for j in 0..=i {
        let e = (p as u32).pow((i - j) as u32);
        let term = IntPolynomial::var(&var(j)).pow(e).scale(&big_pow(p, j as u32));
        acc = &acc + &term;
    }
    acc
}

/// The ghost polynomial `w_i` in `X0..Xi`.
pub fn ghost_poly(p: u64, i: usize) -> IntPolynomial {
    ghost_in(p, i, x_var)
}

/// Solves the ghost recursion for the given ghost images.
fn ghost_recursion(p: u64, images: &[IntPolynomial]) -> Result<Vec<IntPolynomial>> {
    let mut solved: Vec<IntPolynomial> = Vec::with_capacity(images.len());
    // powers[j] holds Q_j^(p^(i-j)) for the current step i.
    let mut powers: Vec<IntPolynomial> = Vec::with_capacity(images.len());
    for (i, image) in images.iter().enumerate() {
        for q in powers.iter_mut() {
            *q = q.pow(p as u32);
        }
        let mut rest = image.clone();
        for (j, q) in powers.iter().enumerate() {
            rest = &rest - &q.scale(&big_pow(p, j as u32));
        }
        let qi = rest.exact_div_int(&big_pow(p, i as u32))?;
        powers.push(qi.clone());
        solved.push(qi);
    }
    Ok(solved)
}

fn ghost_images_x(p: u64, n: usize) -> Vec<IntPolynomial> {
    (0..n).map(|i| ghost_in(p, i, x_var)).collect()
}

fn ghost_images_y(p: u64, n: usize) -> Vec<IntPolynomial> {
    (0..n).map(|i| ghost_in(p, i, y_var)).collect()
}

pub fn sum_polys(p: u64, n: usize) -> Result<Vec<IntPolynomial>> {
    let images: Vec<_> = ghost_images_x(p, n)
        .iter()
        .zip(ghost_images_y(p, n).iter())
        .map(|(a, b)| a + b)
        .collect();
    ghost_recursion(p, &images)
}

pub fn prod_polys(p: u64, n: usize) -> Result<Vec<IntPolynomial>> {
    let images: Vec<_> = ghost_images_x(p, n)
        .iter()
        .zip(ghost_images_y(p, n).iter())
        .map(|(a, b)| a * b)
        .collect();
    ghost_recursion(p, &images)
}

pub fn neg_polys(p: u64, n: usize) -> Result<Vec<IntPolynomial>> {
    let images: Vec<_> = ghost_images_x(p, n).iter().map(|a| -a).collect();
    ghost_recursion(p, &images)
}

/// `F_0..F_{n-2}`, with `w_i(F) = w_{i+1}(X)`.
pub fn frob_polys(p: u64, n: usize) -> Result<Vec<IntPolynomial>> {
    if n < 2 {
        return Err(Error::FrobeniusUnavailable);
    }
    let images: Vec<_> = (1..n).map(|i| ghost_in(p, i, x_var)).collect();
    ghost_recursion(p, &images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittPolyTable {
    p: u64,
    n: usize,
    ghost: Vec<IntPolynomial>,
    sum: Vec<IntPolynomial>,
    prod: Vec<IntPolynomial>,
    neg: Vec<IntPolynomial>,
    frob: Vec<IntPolynomial>,
}

/// Which polynomial list of a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Sum,
    Prod,
    Neg,
    Frob,
}

impl WittPolyTable {
    /// Generates the table for `(p, n)` within the default supported grid.
    pub fn generate(p: u64, n: usize) -> Result<Self> {
        match default_max_length(p) {
            Some(max) if n <= max => Self::generate_unchecked(p, n),
            _ => Err(Error::Unsupported { p, n }),
        }
    }

    /// Generates the table for any prime `p` and `n >= 1`, without grid limits.
    pub fn generate_unchecked(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { value: p });
        }
        if n == 0 {
            return Err(Error::Unsupported { p, n });
        }
        let frob = if n >= 2 { frob_polys(p, n)? } else { Vec::new() };
        Ok(WittPolyTable {
            p,
            n,
            ghost: ghost_images_x(p, n),
            sum: sum_polys(p, n)?,
            prod: prod_polys(p, n)?,
            neg: neg_polys(p, n)?,
            frob,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ghost(&self) -> &[IntPolynomial] {
        &self.ghost
    }

    pub fn sum(&self) -> &[IntPolynomial] {
        &self.sum
    }

    pub fn prod(&self) -> &[IntPolynomial] {
        &self.prod
    }

    pub fn neg(&self) -> &[IntPolynomial] {
        &self.neg
    }

    pub fn frob(&self) -> &[IntPolynomial] {
        &self.frob
    }

    pub fn polys(&self, kind: TableKind) -> &[IntPolynomial] {
        match kind {
            TableKind::Sum => &self.sum,
            TableKind::Prod => &self.prod,
            TableKind::Neg => &self.neg,
            TableKind::Frob => &self.frob,
        }
    }

    /// The first `m` coordinates of every operation.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n {
            return Err(Error::OutOfRange {
                index: m,
                max: self.n,
            });
        }
        Ok(WittPolyTable {
            p: self.p,
            n: m,
            ghost: self.ghost[..m].to_vec(),
            sum: self.sum[..m].to_vec(),
            prod: self.prod[..m].to_vec(),
            neg: self.neg[..m].to_vec(),
            frob: self.frob[..m - 1].to_vec(),
        })
    }

    /// Returns a copy with one coefficient changed by `delta`. Only meant for
    /// fault-injection runs of the verification harness; the result no longer
    /// satisfies the ghost equations.
    pub fn with_perturbed_coefficient(
        &self,
        kind: TableKind,
        index: usize,
        term: usize,
        delta: i64,
    ) -> Self {
        let mut out = self.clone();
        let list = match kind {
            TableKind::Sum => &mut out.sum,
            TableKind::Prod => &mut out.prod,
            TableKind::Neg => &mut out.neg,
            TableKind::Frob => &mut out.frob,
        };
        let poly = &list[index];
        let vars = poly.variables().to_vec();
        let terms: Vec<_> = poly
            .terms()
            .enumerate()
            .map(|(k, (m, c))| {
                let c = if k == term % poly.num_terms().max(1) {
                    c + BigInt::from(delta)
                } else {
                    c.clone()
                };
                (m.clone(), c)
            })
            .collect();
        list[index] = IntPolynomial::from_terms(vars, terms);
        out
    }

    /// Checks every ghost equation symbolically by substituting the coordinate
    /// polynomials into the ghost polynomials.
    pub fn verify(&self) -> Result<()> {
        let p = self.p;
        let n = self.n;
        if !is_prime(p) {
            return Err(Error::Verification(format!("{p} is not prime")));
        }
        if [&self.ghost, &self.sum, &self.prod, &self.neg].iter().any(|l| l.len() != n)
            || self.frob.len() != n.saturating_sub(1)
        {
            return Err(Error::Verification("wrong number of polynomials".into()));
        }
        let wx = ghost_images_x(p, n);
        let wy = ghost_images_y(p, n);
        for i in 0..n {
            if self.ghost[i] != wx[i] {
                return Err(Error::Verification(format!("ghost polynomial w_{i} differs")));
            }
        }
        let check = |name: &str, list: &[IntPolynomial], i: usize, want: IntPolynomial| {
            let assignment: HashMap<String, IntPolynomial> =
                (0..=i).map(|j| (x_var(j), list[j].clone())).collect();
            let got = ghost_poly(p, i).substitute(&assignment)?;
            if got != want {
                return Err(Error::Verification(format!(
                    "ghost equation for {name}_{i} fails (p={p})"
                )));
            }
            Ok(())
        };
        for i in 0..n {
            check("S", &self.sum, i, &wx[i] + &wy[i])?;
            check("P", &self.prod, i, &wx[i] * &wy[i])?;
            check("N", &self.neg, i, -&wx[i])?;
            if i + 1 < n {
                check("F", &self.frob, i, wx[i + 1].clone())?;
            }
        }
        for (i, s) in self.sum.iter().chain(&self.prod).chain(&self.neg).enumerate() {
            let allowed = i % n;
            let ok = s.variables().iter().all(|v| {
                v[1..].parse::<usize>().map(|k| k <= allowed).unwrap_or(false)
            });
            if !ok {
                return Err(Error::Verification(format!(
                    "coordinate {allowed} uses variables beyond index {allowed}"
                )));
            }
        }
        Ok(())
    }

    fn to_file(&self) -> TableFile {
        let ser = |l: &[IntPolynomial]| l.iter().map(IntPolynomial::to_serial).collect();
        let mut file = TableFile {
            p: self.p,
            n: self.n,
            ghost: ser(&self.ghost),
            sum: ser(&self.sum),
            prod: ser(&self.prod),
            neg: ser(&self.neg),
            frob: ser(&self.frob),
            checksum: String::new(),
        };
        file.checksum = file.content_checksum();
        file
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("table serializes")
    }

    /// Parses a table, re-verifies all ghost equations, then checks the checksum.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| Error::Corrupt(e.to_string()))?;
        let de = |l: &[SerialPoly]| -> Result<Vec<IntPolynomial>> {
            l.iter().map(IntPolynomial::from_serial).collect()
        };
        let table = WittPolyTable {
            p: file.p,
            n: file.n,
            ghost: de(&file.ghost)?,
            sum: de(&file.sum)?,
            prod: de(&file.prod)?,
            neg: de(&file.neg)?,
            frob: de(&file.frob)?,
        };
        table.verify()?;
        if file.checksum != file.content_checksum() {
            return Err(Error::Corrupt("checksum mismatch".into()));
        }
        Ok(table)
    }

    /// Writes atomically: a temporary file in the same directory, then a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(dir) = dir {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, self.to_json())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// On-disk layout of a cached table.
#[derive(Serialize, Deserialize)]
struct TableFile {
    p: u64,
    n: usize,
    ghost: Vec<SerialPoly>,
    sum: Vec<SerialPoly>,
    prod: Vec<SerialPoly>,
    neg: Vec<SerialPoly>,
    frob: Vec<SerialPoly>,
    checksum: String,
}

impl TableFile {
    fn content_checksum(&self) -> String {
        let body = serde_json::json!({
            "p": self.p,
            "n": self.n,
            "ghost": self.ghost,
            "sum": self.sum,
            "prod": self.prod,
            "neg": self.neg,
            "frob": self.frob,
        });
        hex::encode(Sha256::digest(body.to_string().as_bytes()))
    }
}

fn memo() -> &'static Mutex<HashMap<u64, Arc<WittPolyTable>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<WittPolyTable>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A shared table for `p` of length at least `n`, generated on first use.
pub fn table(p: u64, n: usize) -> Result<Arc<WittPolyTable>> {
    if let Some(t) = memo().lock().unwrap().get(&p) {
        if t.n() >= n {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(WittPolyTable::generate(p, n)?);
    install(t.clone());
    Ok(t)
}

/// Makes `table` available to [`table`] unless a longer one is already present.
pub fn install(table: Arc<WittPolyTable>) {
    let mut m = memo().lock().unwrap();
    let longer = m.get(&table.p()).is_some_and(|t| t.n() >= table.n());
    if !longer {
        m.insert(table.p(), table);
    }
}

/// Directory of verified table files named `witt-p{p}-n{n}.json`.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn path_for(&self, p: u64, n: usize) -> PathBuf {
        self.dir.join(format!("witt-p{p}-n{n}.json"))
    }

    /// Loads and verifies a cached table, regenerating it when missing or invalid.
    pub fn load_or_generate(&self, p: u64, n: usize) -> Result<Arc<WittPolyTable>> {
        let path = self.path_for(p, n);
        if let Ok(t) = WittPolyTable::load(&path) {
            if t.p() == p && t.n() == n {
                let t = Arc::new(t);
                install(t.clone());
                return Ok(t);
            }
        }
        let t = WittPolyTable::generate(p, n)?;
        t.save(&path)?;
        let t = Arc::new(t);
        install(t.clone());
        Ok(t)
    }
}

/// `true` when `f` is congruent to `g` modulo `m` coefficientwise.
pub fn congruent_mod(f: &IntPolynomial, g: &IntPolynomial, m: u64) -> bool {
    (f - g).divisible_by(&BigInt::from(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> IntPolynomial {
        IntPolynomial::var(n)
    }

    fn c(k: i64) -> IntPolynomial {
        IntPolynomial::constant(k)
    }

    #[test]
    fn ghost_examples() {
        assert_eq!(ghost_poly(2, 0), v("X0"));
        assert_eq!(ghost_poly(2, 1), &v("X0").pow(2) + &(&c(2) * &v("X1")));
        let w2 = &(&v("X0").pow(4) + &(&c(2) * &v("X1").pow(2))) + &(&c(4) * &v("X2"));
        assert_eq!(ghost_poly(2, 2), w2);
    }

    #[test]
    fn sum_examples() {
        let s = sum_polys(2, 2).unwrap();
        assert_eq!(s[0], &v("X0") + &v("Y0"));
        assert_eq!(s[1], &(&v("X1") + &v("Y1")) - &(&v("X0") * &v("Y0")));
        let s = sum_polys(3, 2).unwrap();
        let want = &(&(&v("X1") + &v("Y1")) - &(&v("X0").pow(2) * &v("Y0")))
            - &(&v("X0") * &v("Y0").pow(2));
        assert_eq!(s[1], want);
    }

    #[test]
    fn prod_examples() {
        for p in [2, 3, 5] {
            assert_eq!(prod_polys(p, 1).unwrap()[0], &v("X0") * &v("Y0"));
        }
        let p1 = &prod_polys(2, 2).unwrap()[1];
        let want = &(&(&v("X0").pow(2) * &v("Y1")) + &(&v("X1") * &v("Y0").pow(2)))
            + &(&c(2) * &(&v("X1") * &v("Y1")));
        assert_eq!(p1, &want);
    }

    #[test]
    fn neg_examples() {
        let n3 = neg_polys(3, 3).unwrap();
        for (i, ni) in n3.iter().enumerate() {
            assert_eq!(ni, &-&v(&x_var(i)));
        }
        let n2 = neg_polys(2, 2).unwrap();
        assert_eq!(n2[0], -&v("X0"));
        assert_eq!(n2[1], &(-&v("X1")) - &v("X0").pow(2));
    }

    #[test]
    fn frob_examples() {
        assert_eq!(
            frob_polys(2, 2).unwrap()[0],
            &v("X0").pow(2) + &(&c(2) * &v("X1"))
        );
        assert_eq!(
            frob_polys(3, 2).unwrap()[0],
            &v("X0").pow(3) + &(&c(3) * &v("X1"))
        );
        assert!(matches!(frob_polys(2, 1), Err(Error::FrobeniusUnavailable)));
    }

    #[test]
    fn frobenius_lifts_pth_power() {
        for (p, n) in [(2, 4), (3, 3)] {
            let t = WittPolyTable::generate(p, n).unwrap();
            for (i, f) in t.frob().iter().enumerate() {
                assert!(congruent_mod(f, &v(&x_var(i)).pow(p as u32), p), "F_{i} p={p}");
            }
        }
    }

    #[test]
    fn symmetric_in_x_and_y() {
        let t = WittPolyTable::generate(2, 4).unwrap();
        let swap: HashMap<String, IntPolynomial> = (0..4)
            .flat_map(|i| [(x_var(i), v(&y_var(i))), (y_var(i), v(&x_var(i)))])
            .collect();
        for list in [t.sum(), t.prod()] {
            for poly in list {
                let mut a = swap.clone();
                a.retain(|k, _| poly.variables().contains(k));
                assert_eq!(&poly.substitute(&a).unwrap(), poly);
            }
        }
    }

    #[test]
    fn table_round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        let t = WittPolyTable::generate(2, 3).unwrap();
        t.verify().unwrap();
        t.save(&path).unwrap();
        assert_eq!(WittPolyTable::load(&path).unwrap(), t);

        let text = fs::read_to_string(&path).unwrap();
        let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
        json["sum"][1]["terms"][0]["coeff"] = serde_json::Value::from("5");
        assert!(matches!(
            WittPolyTable::from_json(&json.to_string()),
            Err(Error::Verification(_))
        ));

        let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
        json["p"] = serde_json::Value::from(3);
        assert!(matches!(
            WittPolyTable::from_json(&json.to_string()),
            Err(Error::Verification(_))
        ));

        assert!(matches!(
            WittPolyTable::from_json("{not json"),
            Err(Error::Corrupt(_))
        ));
    }

    #[test]
    fn cache_reuses_files() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let a = cache.load_or_generate(3, 2).unwrap();
        assert!(cache.path_for(3, 2).exists());
        let b = cache.load_or_generate(3, 2).unwrap();
        assert_eq!(*a, *b);
    }

    #[test]
    fn truncation_matches_generation() {
        let t = WittPolyTable::generate(3, 3).unwrap();
        assert_eq!(t.truncated(2).unwrap(), WittPolyTable::generate(3, 2).unwrap());
    }

    #[test]
    fn outside_grid() {
        assert!(matches!(WittPolyTable::generate(7, 2), Err(Error::Unsupported { .. })));
        assert!(matches!(WittPolyTable::generate(2, 6), Err(Error::Unsupported { .. })));
        assert!(matches!(
            WittPolyTable::generate_unchecked(4, 2),
            Err(Error::NotPrime { value: 4 })
        ));
    }
}
