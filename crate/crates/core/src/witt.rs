//! Truncated p-typical Witt vectors `W_n(R)` over a finite ring.
//!
//! Operations evaluate the universal polynomials of a [`WittPolyTable`] after
//! compiling them for the base ring: coefficients are mapped into `R` once and
//! terms whose coefficient vanishes in `R` are dropped.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::ring::{Elem, RingElement, RingHandle};
use crate::witt_poly::{self, WittPolyTable};

/// Default bound on `|R|^n` for exhaustive enumeration of `W_n(R)`.
pub const WITT_ENUMERATION_CAP: u64 = 100_000;

/// One polynomial, ready for evaluation over a fixed ring.
#[derive(Clone, Debug)]
struct Program {
    terms: Vec<(Elem, Vec<(usize, u32)>)>,
}

/// Variable slots: `X_i` is slot `i`, `Y_i` is slot `width + i`.
fn slot(var: &str, width: usize) -> usize {
    let idx: usize = var[1..].parse().expect("table variables are X<i> or Y<i>");
    match &var[..1] {
        "X" => idx,
        _ => width + idx,
    }
}

impl Program {
    fn compile(poly: &IntPolynomial, ring: &RingHandle, width: usize) -> Self {
        let slots: Vec<usize> = poly.variables().iter().map(|v| slot(v, width)).collect();
        let terms = poly
            .terms()
            .filter_map(|(m, c)| {
                let coef = ring.int_big(c);
                if coef == ring.zero() {
                    return None;
                }
                let factors = m
                    .exponents()
                    .iter()
                    .zip(&slots)
                    .filter(|(e, _)| **e > 0)
                    .map(|(&e, &s)| (s, e))
                    .collect();
                Some((coef, factors))
            })
            .collect();
        Program { terms }
    }

    fn max_exponent(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|(_, f)| f.iter().map(|&(_, e)| e))
            .max()
            .unwrap_or(0)
    }

    fn eval(&self, ring: &RingHandle, powers: &Powers) -> Elem {
        let mut acc = ring.zero();
        for (coef, factors) in &self.terms {
            let mut t = *coef;
            for &(s, e) in factors {
                t = ring.mul(t, powers.get(s, e));
            }
            acc = ring.add(acc, t);
        }
        acc
    }
}

/// `values[s]^e` for every slot `s` and `e <= max`.
struct Powers {
    max: usize,
    table: Vec<Elem>,
}

impl Powers {
    fn new(ring: &RingHandle, values: &[Elem], max: u32) -> Self {
        let max = max as usize;
        let mut table = Vec::with_capacity(values.len() * (max + 1));
        for &v in values {
            let mut acc = ring.one();
            table.push(acc);
            for _ in 0..max {
                acc = ring.mul(acc, v);
                table.push(acc);
            }
        }
        Powers { max, table }
    }

    fn get(&self, s: usize, e: u32) -> Elem {
        self.table[s * (self.max + 1) + e as usize]
    }
}

struct Compiled {
    sum: Vec<Program>,
    prod: Vec<Program>,
    neg: Vec<Program>,
    frob: Vec<Program>,
    max_binary: u32,
    max_neg: u32,
    max_frob: u32,
}

impl Compiled {
    fn new(table: &WittPolyTable, ring: &RingHandle, n: usize) -> Self {
        let compile = |list: &[IntPolynomial], k: usize| -> Vec<Program> {
            list[..k].iter().map(|f| Program::compile(f, ring, n)).collect()
        };
        let sum = compile(table.sum(), n);
        let prod = compile(table.prod(), n);
        let neg = compile(table.neg(), n);
        let frob = compile(table.frob(), n - 1);
        let max = |l: &[Program]| l.iter().map(Program::max_exponent).max().unwrap_or(0);
        Compiled {
            max_binary: max(&sum).max(max(&prod)),
            max_neg: max(&neg),
            max_frob: max(&frob),
            sum,
            prod,
            neg,
            frob,
        }
    }
}

struct WittData {
    base: RingHandle,
    p: u64,
    n: usize,
    table: Arc<WittPolyTable>,
    compiled: Compiled,
    lower: Option<WittRing>,
}

/// The ring `W_n(R)`. Cheap to clone; all levels below `n` are built alongside.
#[derive(Clone)]
pub struct WittRing(Arc<WittData>);

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({}) p={}", self.0.n, self.0.base.describe(), self.0.p)
    }
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.n == other.0.n
                && self.0.base == other.0.base
                && (Arc::ptr_eq(&self.0.table, &other.0.table)
                    || self.0.table.truncated(self.0.n).ok() == other.0.table.truncated(other.0.n).ok()))
    }
}

impl WittRing {
    /// `W_n(base)` using the shared, verified table for `p`.
    pub fn new(base: &RingHandle, p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { value: p });
        }
        let table = witt_poly::table(p, n)?;
        Self::with_table(base, n, table)
    }

    /// `W_n(base)` evaluated through an explicit table, which is not re-verified.
    pub fn with_table(base: &RingHandle, n: usize, table: Arc<WittPolyTable>) -> Result<Self> {
        if n == 0 || n > table.n() {
            return Err(Error::OutOfRange {
                index: n,
                max: table.n(),
            });
        }
        let lower = if n > 1 {
            Some(Self::with_table(base, n - 1, table.clone())?)
        } else {
            None
        };
        Ok(WittRing(Arc::new(WittData {
            compiled: Compiled::new(&table, base, n),
            base: base.clone(),
            p: table.p(),
            n,
            table,
            lower,
        })))
    }

    pub fn base(&self) -> &RingHandle {
        &self.0.base
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn table(&self) -> &Arc<WittPolyTable> {
        &self.0.table
    }

    /// `|R|^n`, saturating.
    pub fn cardinality(&self) -> u64 {
        let q = self.0.base.order();
        (0..self.0.n).fold(1u64, |acc, _| acc.saturating_mul(q))
    }

    /// `W_m(R)` for `1 <= m <= n`, sharing this ring's table.
    pub fn level(&self, m: usize) -> Result<WittRing> {
        if m == 0 || m > self.0.n {
            return Err(Error::OutOfRange {
                index: m,
                max: self.0.n,
            });
        }
        let mut w = self.clone();
        while w.0.n > m {
            w = w.0.lower.clone().expect("lower levels exist");
        }
        Ok(w)
    }

    fn check(&self, x: &WittVector) -> Result<()> {
        if x.parent == *self {
            Ok(())
        } else {
            Err(Error::MismatchedParents)
        }
    }

    fn wrap(&self, coords: Vec<Elem>) -> WittVector {
        WittVector {
            parent: self.clone(),
            coords,
        }
    }

    /// Vector with the given coordinates, each a valid element of the base ring.
    pub fn from_coords(&self, coords: Vec<Elem>) -> Result<WittVector> {
        if coords.len() != self.0.n {
            return Err(Error::InvalidRing(format!(
                "expected {} coordinates, got {}",
                self.0.n,
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.0 as u64 >= self.0.base.order()) {
            return Err(Error::InvalidRing(format!("{} is not a coordinate", c.0)));
        }
        Ok(self.wrap(coords))
    }

    pub fn from_elements(&self, coords: &[RingElement]) -> Result<WittVector> {
        if coords.iter().any(|c| c.ring() != &self.0.base) {
            return Err(Error::MismatchedParents);
        }
        self.from_coords(coords.iter().map(RingElement::value).collect())
    }

    pub fn zero(&self) -> WittVector {
        self.wrap(vec![self.0.base.zero(); self.0.n])
    }

    pub fn one(&self) -> WittVector {
        self.teichmuller(self.0.base.one())
    }

    /// The multiplicative representative `(r, 0, ..., 0)`.
    pub fn teichmuller(&self, r: Elem) -> WittVector {
        let mut c = vec![self.0.base.zero(); self.0.n];
        c[0] = r;
        self.wrap(c)
    }

    fn binary(&self, progs: &[Program], x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let ring = &self.0.base;
        let vals: Vec<Elem> = x.iter().chain(y).copied().collect();
        let powers = Powers::new(ring, &vals, self.0.compiled.max_binary);
        progs.iter().map(|f| f.eval(ring, &powers)).collect()
    }

    pub fn add(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.binary(&self.0.compiled.sum, &x.coords, &y.coords)))
    }

    pub fn mul(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.binary(&self.0.compiled.prod, &x.coords, &y.coords)))
    }

    pub fn neg(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        let ring = &self.0.base;
        let powers = Powers::new(ring, &x.coords, self.0.compiled.max_neg);
        Ok(self.wrap(
            self.0
                .compiled
                .neg
                .iter()
                .map(|f| f.eval(ring, &powers))
                .collect(),
        ))
    }

    pub fn sub(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.add(x, &self.neg(y)?)
    }

    pub fn pow(&self, x: &WittVector, mut e: u64) -> Result<WittVector> {
        self.check(x)?;
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `k·x` by double-and-add.
    pub fn scale(&self, k: u64, x: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        let mut acc = self.zero();
        let mut base = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `p·x` as `x` added to itself `p` times.
    pub fn p_mul(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        let mut acc = x.clone();
        for _ in 1..self.0.p {
            acc = self.add(&acc, x)?;
        }
        Ok(acc)
    }

    /// `V(x)` kept at length `n`: `(0, x_0, ..., x_{n-2})`.
    pub fn verschiebung(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        let mut c = Vec::with_capacity(self.0.n);
        c.push(self.0.base.zero());
        c.extend_from_slice(&x.coords[..self.0.n - 1]);
        Ok(self.wrap(c))
    }

    /// `V^k(x)` at length `n`.
    pub fn verschiebung_pow(&self, x: &WittVector, k: usize) -> Result<WittVector> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.verschiebung(&y)?;
        }
        self.check(&y)?;
        Ok(y)
    }

    /// `V: W_{n-1}(R) -> W_n(R)`, losing no information.
    pub fn verschiebung_from_lower(&self, x: &WittVector) -> Result<WittVector> {
        let lower = self.0.lower.as_ref().ok_or(Error::FrobeniusUnavailable)?;
        lower.check(x)?;
        let mut c = Vec::with_capacity(self.0.n);
        c.push(self.0.base.zero());
        c.extend_from_slice(&x.coords);
        Ok(self.wrap(c))
    }

    /// `F: W_n(R) -> W_{n-1}(R)`.
    pub fn frobenius(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        let lower = self.0.lower.as_ref().ok_or(Error::FrobeniusUnavailable)?;
        let ring = &self.0.base;
        let powers = Powers::new(ring, &x.coords, self.0.compiled.max_frob);
        Ok(lower.wrap(
            self.0
                .compiled
                .frob
                .iter()
                .map(|f| f.eval(ring, &powers))
                .collect(),
        ))
    }

    fn require_char_p(&self) -> Result<()> {
        let c = self.0.base.characteristic();
        if c == self.0.p {
            Ok(())
        } else {
            Err(Error::NotCharacteristic {
                p: self.0.p,
                characteristic: c,
            })
        }
    }

    /// Same-length Frobenius of a characteristic-`p` base: `r -> r^p` in every coordinate.
    pub fn frobenius_charp(&self, x: &WittVector) -> Result<WittVector> {
        self.check(x)?;
        self.require_char_p()?;
        let ring = &self.0.base;
        Ok(self.wrap(x.coords.iter().map(|&r| ring.pow(r, self.0.p)).collect()))
    }

    /// `F^k` at fixed length, characteristic `p` only.
    pub fn frobenius_charp_pow(&self, x: &WittVector, k: usize) -> Result<WittVector> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.frobenius_charp(&y)?;
        }
        self.check(&y)?;
        Ok(y)
    }

    /// Ghost components `(w_0(x), ..., w_{n-1}(x))` in the base ring.
    pub fn ghost(&self, x: &WittVector) -> Result<Vec<Elem>> {
        self.check(x)?;
        let ring = &self.0.base;
        let p = self.0.p;
        Ok((0..self.0.n)
            .map(|i| {
                let mut acc = ring.zero();
                let mut pj = ring.one();
                for j in 0..=i {
                    let term = ring.pow(x.coords[j], p.pow((i - j) as u32));
                    acc = ring.add(acc, ring.mul(pj, term));
                    pj = ring.mul(pj, ring.int(p as i64));
                }
                acc
            })
            .collect())
    }

    /// First `m` coordinates, as an element of `W_m(R)`.
    pub fn restrict(&self, x: &WittVector, m: usize) -> Result<WittVector> {
        self.check(x)?;
        let target = self.level(m)?;
        Ok(target.wrap(x.coords[..m].to_vec()))
    }

    /// Largest `m` with the first `m` coordinates zero; `n` for the zero vector.
    pub fn v_pseudovaluation(&self, x: &WittVector) -> Result<usize> {
        self.check(x)?;
        Ok(x.coords
            .iter()
            .position(|&c| c != self.0.base.zero())
            .unwrap_or(self.0.n))
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        let order = self.cardinality();
        if order > cap {
            Err(Error::CapExceeded { order, cap })
        } else {
            Ok(())
        }
    }

    /// The vector with lexicographic index `idx` (`coords[0]` most significant).
    pub fn element_at(&self, mut idx: u64) -> WittVector {
        let q = self.0.base.order();
        let mut c = vec![Elem::ZERO; self.0.n];
        for slot in c.iter_mut().rev() {
            *slot = Elem((idx % q) as u32);
            idx /= q;
        }
        self.wrap(c)
    }

    pub fn index_of(&self, x: &WittVector) -> u64 {
        let q = self.0.base.order();
        x.coords.iter().fold(0, |acc, c| acc * q + c.0 as u64)
    }

    /// Every vector exactly once, in lexicographic order, within the default cap.
    pub fn elements(&self) -> Result<impl Iterator<Item = WittVector> + '_> {
        self.elements_within(WITT_ENUMERATION_CAP)
    }

    pub fn elements_within(&self, cap: u64) -> Result<impl Iterator<Item = WittVector> + '_> {
        self.check_cap(cap)?;
        Ok((0..self.cardinality()).map(move |i| self.element_at(i)))
    }

    /// `{x : p·x = 0}`, in enumeration order.
    pub fn p_torsion_elements(&self) -> Result<Vec<WittVector>> {
        let mut out = Vec::new();
        for x in self.elements()? {
            if self.p_mul(&x)?.is_zero() {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Additive order of `1`. Errors if `1` has not returned to `0` after
    /// `|W_n(R)|` steps, which only happens with an inconsistent table.
    pub fn order_of_one(&self) -> Result<u64> {
        let one = self.one();
        let mut acc = one.clone();
        let mut k = 1;
        while !acc.is_zero() {
            if k >= self.cardinality() {
                return Err(Error::Verification("1 has no additive order within |W_n(R)|".into()));
            }
            acc = self.add(&acc, &one)?;
            k += 1;
        }
        Ok(k)
    }

    /// Coordinates as an array of base-ring payloads.
    pub fn payload(&self, x: &WittVector) -> Value {
        Value::Array(x.coords.iter().map(|&c| self.0.base.payload(c)).collect())
    }

    pub fn from_payload(&self, v: &Value) -> Option<WittVector> {
        let arr = v.as_array()?;
        let coords = arr
            .iter()
            .map(|c| self.0.base.from_payload(c))
            .collect::<Option<Vec<_>>>()?;
        self.from_coords(coords).ok()
    }

    pub fn format(&self, x: &WittVector) -> String {
        let parts: Vec<String> = x.coords.iter().map(|&c| self.0.base.format(c)).collect();
        format!("({})", parts.join(", "))
    }
}

/// An element of some `W_n(R)`.
#[derive(Clone)]
pub struct WittVector {
    parent: WittRing,
    coords: Vec<Elem>,
}

impl WittVector {
    pub fn parent(&self) -> &WittRing {
        &self.parent
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> RingElement {
        self.parent.base().element(self.coords[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == Elem::ZERO)
    }
}

impl PartialEq for WittVector {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.parent == other.parent
    }
}

impl Eq for WittVector {}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parent.format(self))
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parent.format(self))
    }
}
