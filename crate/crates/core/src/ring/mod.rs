//! Small finite commutative rings with canonical element encodings.
//!
//! Every ring of order `N` encodes its elements as the integers `0..N`, in the
//! lexicographic order of their payloads. Encodings are canonical, so element
//! equality is integer equality. `Elem(0)` is always the zero element.

mod ideal;
mod map;

pub use ideal::{
    ideal_closure, idempotents, local_factors, localization_exponents, localize_at,
    localize_at_exponent, p_torsion_ideal, primitive_idempotents, quotient_by_ideal,
};
pub use map::RingMap;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::error::{Error, Result};

/// Default bound on the order of rings that may be enumerated.
pub const DEFAULT_ENUMERATION_CAP: u64 = 4096;

/// Rings at most this large get precomputed addition and multiplication tables.
const TABLE_LIMIT: u64 = 512;

/// Largest order any constructor accepts.
const MAX_ORDER: u64 = 1 << 24;

/// Canonical encoding of a ring element inside its parent ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The construction data of a ring.
#[derive(Debug, PartialEq, Eq)]
pub enum RingKind {
    Zmod {
        modulus: u32,
    },
    /// `base[var]/(var^d + c_{d-1} var^{d-1} + ... + c_0)`; `modulus` holds `c_0..c_{d-1}`.
    PolyQuotient {
        base: RingHandle,
        modulus: Vec<Elem>,
        var: String,
    },
    Product {
        left: RingHandle,
        right: RingHandle,
    },
    Quotient(Cosets),
    /// `ambient[at^{-1}]`, realised as `ambient/(1 - e)` for an idempotent power `e` of `at`.
    Localization {
        at: Elem,
        cosets: Cosets,
    },
}

/// Coset data of `ambient / ideal`. Labels follow the order of the least
/// representative of each coset.
#[derive(Debug, PartialEq, Eq)]
pub struct Cosets {
    pub ambient: RingHandle,
    pub generators: Vec<Elem>,
    pub ideal: Vec<Elem>,
    reps: Vec<Elem>,
    label_of: Vec<u32>,
}

impl Cosets {
    fn new(ambient: RingHandle, generators: Vec<Elem>, ideal: Vec<Elem>) -> Self {
        let order = ambient.order() as usize;
        let mut label_of = vec![u32::MAX; order];
        let mut reps = Vec::with_capacity(order / ideal.len().max(1));
        for x in 0..order {
            if label_of[x] != u32::MAX {
                continue;
            }
            let label = reps.len() as u32;
            reps.push(Elem(x as u32));
            for &i in &ideal {
                label_of[ambient.add(Elem(x as u32), i).index()] = label;
            }
        }
        Cosets {
            ambient,
            generators,
            ideal,
            reps,
            label_of,
        }
    }

    pub fn representative(&self, label: Elem) -> Elem {
        self.reps[label.index()]
    }

    pub fn label(&self, x: Elem) -> Elem {
        Elem(self.label_of[x.index()])
    }

    fn len(&self) -> u64 {
        self.reps.len() as u64
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

struct RingData {
    kind: RingKind,
    order: u64,
    characteristic: u64,
    one: Elem,
    neg: Vec<u32>,
    /// `k * 1` for `0 <= k < characteristic`.
    integers: Vec<Elem>,
    tables: Option<Tables>,
}

/// A finite commutative ring. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct RingHandle(Arc<RingData>);

impl PartialEq for RingHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for RingHandle {}

impl fmt::Debug for RingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHandle({}, order {})", self.describe(), self.order())
    }
}

impl RingHandle {
    /// `Z/mZ`. `m = 1` gives the zero ring.
    pub fn zmod(m: u64) -> Result<Self> {
        if m == 0 || m > MAX_ORDER {
            return Err(Error::InvalidRing(format!("modulus {m} out of range")));
        }
        Ok(Self::build(RingKind::Zmod { modulus: m as u32 }, m))
    }

    /// `base[var]/(f)` for a monic `f` given by its coefficients from degree 0 upwards.
    pub fn poly_quotient(base: &RingHandle, modulus: &[Elem], var: &str) -> Result<Self> {
        let Some((&lead, rest)) = modulus.split_last() else {
            return Err(Error::NonMonic("empty modulus".into()));
        };
        if rest.is_empty() {
            return Err(Error::InvalidRing("modulus must have degree at least 1".into()));
        }
        if lead != base.one() {
            return Err(Error::NonMonic(format!(
                "leading coefficient {} is not 1",
                base.format(lead)
            )));
        }
        if let Some(bad) = modulus.iter().find(|c| c.0 as u64 >= base.order()) {
            return Err(Error::InvalidRing(format!("coefficient {bad:?} not in base ring")));
        }
        let order = (base.order() as u128).pow(rest.len() as u32);
        if order > MAX_ORDER as u128 {
            return Err(Error::InvalidRing(format!("order {order} too large")));
        }
        Ok(Self::build(
            RingKind::PolyQuotient {
                base: base.clone(),
                modulus: rest.to_vec(),
                var: var.to_string(),
            },
            order as u64,
        ))
    }

    pub fn product(left: &RingHandle, right: &RingHandle) -> Result<Self> {
        let order = left.order() * right.order();
        if order > MAX_ORDER {
            return Err(Error::InvalidRing(format!("order {order} too large")));
        }
        Ok(Self::build(
            RingKind::Product {
                left: left.clone(),
                right: right.clone(),
            },
            order,
        ))
    }

    fn from_cosets(cosets: Cosets, at: Option<Elem>) -> Self {
        let order = cosets.len();
        let kind = match at {
            Some(at) => RingKind::Localization { at, cosets },
            None => RingKind::Quotient(cosets),
        };
        Self::build(kind, order)
    }

    fn build(kind: RingKind, order: u64) -> Self {
        let mut data = RingData {
            kind,
            order,
            characteristic: 1,
            one: Elem::ZERO,
            neg: Vec::new(),
            integers: Vec::new(),
            tables: None,
        };
        data.one = data.one_structural();
        data.neg = (0..order as u32).map(|x| data.neg_structural(Elem(x)).0).collect();
        if order <= TABLE_LIMIT {
            let n = order as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    let (x, y) = (Elem(a as u32), Elem(b as u32));
                    add[a * n + b] = data.add_structural(x, y).0;
                    mul[a * n + b] = data.mul_structural(x, y).0;
                }
            }
            data.tables = Some(Tables { add, mul });
        }
        let mut integers = vec![Elem::ZERO];
        let mut k = data.one;
        while k != Elem::ZERO {
            integers.push(k);
            k = data.add(k, data.one);
        }
        data.characteristic = integers.len() as u64;
        data.integers = integers;
        RingHandle(Arc::new(data))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.0.one
    }

    pub fn is_zero_ring(&self) -> bool {
        self.0.order == 1
    }

    pub fn same_ring(&self, other: &RingHandle) -> bool {
        self == other
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add(a, b)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, mut base: Elem, mut exp: u64) -> Elem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Image of the integer `k` under `Z -> R`.
    pub fn int(&self, k: i64) -> Elem {
        let c = self.0.characteristic as i64;
        self.0.integers[k.rem_euclid(c) as usize]
    }

    pub fn int_big(&self, k: &BigInt) -> Elem {
        let c = BigInt::from(self.0.characteristic);
        let r = ((k % &c) + &c) % &c;
        self.0.integers[r.to_usize().expect("residue below characteristic")]
    }

    /// `k * x` for a nonnegative integer `k`.
    pub fn scale(&self, k: u64, x: Elem) -> Elem {
        self.mul(self.int((k % self.characteristic()) as i64), x)
    }

    /// Least `k >= 1` with `k * x = 0`.
    pub fn additive_order(&self, x: Elem) -> u64 {
        let mut k = 1;
        let mut acc = x;
        while acc != Elem::ZERO {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }

    /// Least `k >= 1` with `x^k = 0`, or `None` when `x` is not nilpotent.
    pub fn nilpotency_index(&self, x: Elem) -> Option<u64> {
        let mut acc = x;
        for k in 1..=self.order() {
            if acc == Elem::ZERO {
                return Some(k);
            }
            acc = self.mul(acc, x);
        }
        None
    }

    pub fn is_nilpotent(&self, x: Elem) -> bool {
        self.pow(x, self.order()) == Elem::ZERO
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        let one = self.one();
        self.all_elements().find(|&y| self.mul(x, y) == one)
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.inverse(x).is_some()
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        if self.order() > cap {
            Err(Error::CapExceeded {
                order: self.order(),
                cap,
            })
        } else {
            Ok(())
        }
    }

    /// All elements in canonical order, subject to the default enumeration cap.
    pub fn elements(&self) -> Result<impl Iterator<Item = Elem>> {
        self.elements_within(DEFAULT_ENUMERATION_CAP)
    }

    pub fn elements_within(&self, cap: u64) -> Result<impl Iterator<Item = Elem>> {
        self.check_cap(cap)?;
        Ok(self.all_elements())
    }

    /// All elements without a cap check; callers must bound the order themselves.
    pub fn all_elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order() as u32).map(Elem)
    }

    pub fn element(&self, x: Elem) -> RingElement {
        assert!((x.0 as u64) < self.order(), "element outside ring");
        RingElement {
            ring: self.clone(),
            value: x,
        }
    }

    /// Human-readable construction.
    pub fn describe(&self) -> String {
        match self.kind() {
            RingKind::Zmod { modulus } => format!("Z/{modulus}"),
            RingKind::PolyQuotient { base, modulus, var } => {
                let mut full = modulus.clone();
                full.push(base.one());
                format!("{}[{var}]/({})", base.describe(), format_poly(base, &full, var))
            }
            RingKind::Product { left, right } => {
                format!("product({},{})", left.describe(), right.describe())
            }
            RingKind::Quotient(c) => format!(
                "({})/({})",
                c.ambient.describe(),
                c.generators
                    .iter()
                    .map(|&g| c.ambient.format(g))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            RingKind::Localization { at, cosets } => {
                format!("({})[1/{}]", cosets.ambient.describe(), cosets.ambient.format(*at))
            }
        }
    }

    /// Human-readable element.
    pub fn format(&self, x: Elem) -> String {
        match self.kind() {
            RingKind::Zmod { .. } => x.0.to_string(),
            RingKind::PolyQuotient { base, modulus, var } => {
                format_poly(base, &self.0.digits(x, base, modulus.len()), var)
            }
            RingKind::Product { left, right } => {
                let (a, b) = split_pair(x, right);
                format!("({}, {})", left.format(a), right.format(b))
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => {
                format!("[{}]", c.ambient.format(c.representative(x)))
            }
        }
    }

    /// Structured payload: an integer residue, a coefficient array (degree 0
    /// first), a pair, or `{"coset": representative}`.
    pub fn payload(&self, x: Elem) -> Value {
        match self.kind() {
            RingKind::Zmod { .. } => Value::from(x.0),
            RingKind::PolyQuotient { base, modulus, .. } => Value::Array(
                self.0
                    .digits(x, base, modulus.len())
                    .into_iter()
                    .map(|d| base.payload(d))
                    .collect(),
            ),
            RingKind::Product { left, right } => {
                let (a, b) = split_pair(x, right);
                Value::Array(vec![left.payload(a), right.payload(b)])
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => {
                serde_json::json!({ "coset": c.ambient.payload(c.representative(x)) })
            }
        }
    }

    /// Inverse of [`RingHandle::payload`].
    pub fn from_payload(&self, v: &Value) -> Option<Elem> {
        match self.kind() {
            RingKind::Zmod { modulus } => {
                let k = v.as_u64()?;
                (k < *modulus as u64).then_some(Elem(k as u32))
            }
            RingKind::PolyQuotient { base, modulus, .. } => {
                let digits = v.as_array()?;
                if digits.len() != modulus.len() {
                    return None;
                }
                let q = base.order() as u32;
                let mut idx = 0u32;
                for d in digits.iter().rev() {
                    idx = idx * q + base.from_payload(d)?.0;
                }
                Some(Elem(idx))
            }
            RingKind::Product { left, right } => {
                let pair = v.as_array()?;
                if pair.len() != 2 {
                    return None;
                }
                let a = left.from_payload(&pair[0])?;
                let b = right.from_payload(&pair[1])?;
                Some(Elem(a.0 * right.order() as u32 + b.0))
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => {
                let rep = c.ambient.from_payload(v.get("coset")?)?;
                Some(c.label(rep))
            }
        }
    }
}

fn split_pair(x: Elem, right: &RingHandle) -> (Elem, Elem) {
    let r = right.order() as u32;
    (Elem(x.0 / r), Elem(x.0 % r))
}

/// Formats `sum coeffs[k] var^k`, highest degree first.
pub(crate) fn format_poly(base: &RingHandle, coeffs: &[Elem], var: &str) -> String {
    let nested = !matches!(base.kind(), RingKind::Zmod { .. });
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == Elem::ZERO {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let coeff = base.format(c);
        let coeff = if nested { format!("({coeff})") } else { coeff };
        terms.push(if k == 0 {
            coeff
        } else if c == base.one() {
            mono
        } else {
            format!("{coeff}{mono}")
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

impl RingData {
    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.add[a.index() * self.order as usize + b.index()]),
            None => self.add_structural(a, b),
        }
    }

    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.mul[a.index() * self.order as usize + b.index()]),
            None => self.mul_structural(a, b),
        }
    }

    fn digits(&self, x: Elem, base: &RingHandle, d: usize) -> Vec<Elem> {
        let q = base.order() as u32;
        let mut v = x.0;
        (0..d)
            .map(|_| {
                let digit = Elem(v % q);
                v /= q;
                digit
            })
            .collect()
    }

    fn encode(digits: &[Elem], base: &RingHandle) -> Elem {
        let q = base.order() as u32;
        Elem(digits.iter().rev().fold(0, |acc, d| acc * q + d.0))
    }

    fn one_structural(&self) -> Elem {
        match &self.kind {
            RingKind::Zmod { modulus } => Elem(if *modulus == 1 { 0 } else { 1 }),
            RingKind::PolyQuotient { base, .. } => base.one(),
            RingKind::Product { left, right } => {
                Elem(left.one().0 * right.order() as u32 + right.one().0)
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => {
                c.label(c.ambient.one())
            }
        }
    }

    fn neg_structural(&self, a: Elem) -> Elem {
        match &self.kind {
            RingKind::Zmod { modulus } => Elem((modulus - a.0) % modulus),
            RingKind::PolyQuotient { base, modulus, .. } => {
                let d: Vec<Elem> = self
                    .digits(a, base, modulus.len())
                    .into_iter()
                    .map(|x| base.neg(x))
                    .collect();
                Self::encode(&d, base)
            }
            RingKind::Product { left, right } => {
                let (x, y) = split_pair(a, right);
                Elem(left.neg(x).0 * right.order() as u32 + right.neg(y).0)
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => {
                c.label(c.ambient.neg(c.representative(a)))
            }
        }
    }

    fn add_structural(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            RingKind::Zmod { modulus } => {
                Elem(((a.0 as u64 + b.0 as u64) % *modulus as u64) as u32)
            }
            RingKind::PolyQuotient { base, modulus, .. } => {
                let d = modulus.len();
                let x = self.digits(a, base, d);
                let y = self.digits(b, base, d);
                let s: Vec<Elem> = x.iter().zip(&y).map(|(&u, &v)| base.add(u, v)).collect();
                Self::encode(&s, base)
            }
            RingKind::Product { left, right } => {
                let (x0, x1) = split_pair(a, right);
                let (y0, y1) = split_pair(b, right);
                Elem(left.add(x0, y0).0 * right.order() as u32 + right.add(x1, y1).0)
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => c.label(
                c.ambient
                    .add(c.representative(a), c.representative(b)),
            ),
        }
    }

    fn mul_structural(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            RingKind::Zmod { modulus } => {
                Elem(((a.0 as u64 * b.0 as u64) % *modulus as u64) as u32)
            }
            RingKind::PolyQuotient { base, modulus, .. } => {
                let d = modulus.len();
                let x = self.digits(a, base, d);
                let y = self.digits(b, base, d);
                let mut prod = vec![Elem::ZERO; 2 * d - 1];
                for (i, &u) in x.iter().enumerate() {
                    if u == Elem::ZERO {
                        continue;
                    }
                    for (j, &v) in y.iter().enumerate() {
                        prod[i + j] = base.add(prod[i + j], base.mul(u, v));
                    }
                }
                // var^d = -(c_0 + ... + c_{d-1} var^{d-1})
                for k in (d..2 * d - 1).rev() {
                    let c = prod[k];
                    if c == Elem::ZERO {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate() {
                        prod[k - d + i] = base.sub(prod[k - d + i], base.mul(c, m));
                    }
                }
                prod.truncate(d);
                Self::encode(&prod, base)
            }
            RingKind::Product { left, right } => {
                let (x0, x1) = split_pair(a, right);
                let (y0, y1) = split_pair(b, right);
                Elem(left.mul(x0, y0).0 * right.order() as u32 + right.mul(x1, y1).0)
            }
            RingKind::Quotient(c) | RingKind::Localization { cosets: c, .. } => c.label(
                c.ambient
                    .mul(c.representative(a), c.representative(b)),
            ),
        }
    }
}

/// An element together with its parent ring, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: RingHandle,
    value: Elem,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ring.format(self.value), self.ring.describe())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(self.value))
    }
}

impl RingElement {
    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    fn same_parent(&self, other: &RingElement) -> Result<()> {
        if self.ring.same_ring(&other.ring) {
            Ok(())
        } else {
            Err(Error::MismatchedParents)
        }
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_parent(other)?;
        Ok(self.ring.element(self.ring.add(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_parent(other)?;
        Ok(self.ring.element(self.ring.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> RingElement {
        self.ring.element(self.ring.neg(self.value))
    }

    pub fn pow(&self, exp: u64) -> RingElement {
        self.ring.element(self.ring.pow(self.value, exp))
    }

    pub fn additive_order(&self) -> u64 {
        self.ring.additive_order(self.value)
    }

    pub fn nilpotency_index(&self) -> Option<u64> {
        self.ring.nilpotency_index(self.value)
    }
}

/// Reduces an integer coefficient list into `base` (used by parsers).
pub fn coefficients_in(base: &RingHandle, coeffs: &[BigInt]) -> Vec<Elem> {
    coeffs.iter().map(|c| base.int_big(c)).collect()
}
