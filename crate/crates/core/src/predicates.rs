//! Ring properties of finite rings decided by exhaustion, the preduced ideal and
//! the preduced quotient.
//!
//! Witnesses are always the least violating element in enumeration order.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::ring::{idempotents, quotient_by_ideal};
use crate::ring::{Elem, RingHandle, RingMap};

fn elements(ring: &RingHandle) -> Result<Vec<Elem>> {
    Ok(ring.elements()?.collect())
}

fn first_nonzero(ring: &RingHandle, pred: impl Fn(Elem) -> bool) -> Result<Option<Elem>> {
    Ok(ring.elements()?.filter(|&r| r != Elem::ZERO).find(|&r| pred(r)))
}

/// `(reduced, least nonzero nilpotent)`.
pub fn is_reduced(ring: &RingHandle) -> Result<(bool, Option<Elem>)> {
    let w = first_nonzero(ring, |r| ring.is_nilpotent(r))?;
    Ok((w.is_none(), w))
}

/// `(domain, least nonzero zero divisor)`. The zero ring is not a domain.
pub fn is_domain(ring: &RingHandle) -> Result<(bool, Option<Elem>)> {
    if ring.is_zero_ring() {
        return Ok((false, None));
    }
    let all = elements(ring)?;
    let w = all.iter().copied().filter(|&a| a != Elem::ZERO).find(|&a| {
        all.iter()
            .any(|&b| b != Elem::ZERO && ring.mul(a, b) == Elem::ZERO)
    });
    Ok((w.is_none(), w))
}

/// `(field, least nonzero non-unit)`. The zero ring is not a field.
pub fn is_field(ring: &RingHandle) -> Result<(bool, Option<Elem>)> {
    if ring.is_zero_ring() {
        return Ok((false, None));
    }
    let w = first_nonzero(ring, |r| !ring.is_unit(r))?;
    Ok((w.is_none(), w))
}

/// `(local, least idempotent other than 0 and 1)`; local means exactly two idempotents.
pub fn is_local(ring: &RingHandle) -> Result<(bool, Option<Elem>)> {
    let idem = idempotents(ring)?;
    let w = idem
        .iter()
        .copied()
        .find(|&e| e != ring.zero() && e != ring.one());
    Ok((idem.len() == 2, w))
}

/// No nonzero `r` with `p·r = 0` and `r^p = 0`; the witness is the least such `r`.
pub fn is_preduced(ring: &RingHandle, p: u64) -> Result<(bool, Option<Elem>)> {
    let w = first_nonzero(ring, |r| {
        ring.scale(p, r) == Elem::ZERO && ring.pow(r, p) == Elem::ZERO
    })?;
    Ok((w.is_none(), w))
}

/// Cut-off for the existential in the preduced ideal: `max(v_p(char R), |R|)`.
pub fn preduced_bound(ring: &RingHandle, p: u64) -> u64 {
    (valuation(ring.characteristic(), p) as u64).max(ring.order())
}

/// `p^k r = 0 and r^(p k) = 0`.
fn killed_at(ring: &RingHandle, p: u64, r: Elem, k: u64) -> bool {
    scale_by_p_power(ring, p, r, k) == Elem::ZERO && ring.pow(r, p * k) == Elem::ZERO
}

fn scale_by_p_power(ring: &RingHandle, p: u64, mut r: Elem, k: u64) -> Elem {
    for _ in 0..k {
        if r == Elem::ZERO {
            break;
        }
        r = ring.scale(p, r);
    }
    r
}

/// `{r : p^k r = 0 and r^(pk) = 0 for some k <= B}`, checked to be an ideal.
///
/// Both conditions are monotone in `k`, so testing `k = B` decides the existential.
pub fn preduced_ideal(ring: &RingHandle, p: u64) -> Result<Vec<Elem>> {
    let b = preduced_bound(ring, p).max(1);
    let all = elements(ring)?;
    let ideal: Vec<Elem> = all
        .iter()
        .copied()
        .filter(|&r| killed_at(ring, p, r, b))
        .collect();
    let mut member = vec![false; ring.order() as usize];
    for &r in &ideal {
        member[r.index()] = true;
    }
    for &a in &ideal {
        for &b in &ideal {
            if !member[ring.add(a, b).index()] {
                return Err(Error::Verification(format!(
                    "preduced ideal not closed under addition at {} + {}",
                    ring.format(a),
                    ring.format(b)
                )));
            }
        }
        for &s in &all {
            if !member[ring.mul(a, s).index()] {
                return Err(Error::Verification(format!(
                    "preduced ideal not closed under multiplication at {} * {}",
                    ring.format(a),
                    ring.format(s)
                )));
            }
        }
    }
    Ok(ideal)
}

/// `R / J(R)` with its projection; `R` itself with the identity when `J(R) = 0`.
pub fn preduced_quotient(ring: &RingHandle, p: u64) -> Result<(RingHandle, RingMap)> {
    let ideal = preduced_ideal(ring, p)?;
    if ideal.len() <= 1 {
        return Ok((ring.clone(), RingMap::identity(ring)));
    }
    quotient_by_ideal(ring, &ideal)
}

/// The three conditions of the induction lemma:
/// `R` preduced; every nonzero `r` and `k <= B` has `p^k r != 0` or `r^(pk) != 0`;
/// every nonzero `r` has `p^k r != 0` for all `k <= B` or `r^(pk) != 0` for all `k <= B`.
pub fn preduced_induction_conditions(ring: &RingHandle, p: u64) -> Result<[bool; 3]> {
    let b = preduced_bound(ring, p);
    let (first, _) = is_preduced(ring, p)?;
    let nonzero: Vec<Elem> = ring.elements()?.filter(|&r| r != Elem::ZERO).collect();
    let second = nonzero
        .iter()
        .all(|&r| (1..=b).all(|k| !killed_at(ring, p, r, k)));
    let third = nonzero.iter().all(|&r| {
        (1..=b).all(|k| scale_by_p_power(ring, p, r, k) != Elem::ZERO)
            || (1..=b).all(|k| ring.pow(r, p * k) != Elem::ZERO)
    });
    Ok([first, second, third])
}

/// Whether the three induction-lemma conditions agree on `R`.
pub fn check_preduced_induction(ring: &RingHandle, p: u64) -> Result<bool> {
    let [a, b, c] = preduced_induction_conditions(ring, p)?;
    Ok(a == b && b == c)
}

fn frobenius_image(ring: &RingHandle, p: u64) -> Result<Vec<bool>> {
    let mut hit = vec![false; ring.order() as usize];
    for r in ring.elements()? {
        hit[ring.pow(r, p).index()] = true;
    }
    Ok(hit)
}

/// Characteristic `p` and `r -> r^p` injective.
pub fn is_perfect(ring: &RingHandle, p: u64) -> Result<bool> {
    if ring.characteristic() != p {
        return Ok(false);
    }
    let mut seen = vec![false; ring.order() as usize];
    for r in ring.elements()? {
        let i = ring.pow(r, p).index();
        if seen[i] {
            return Ok(false);
        }
        seen[i] = true;
    }
    Ok(true)
}

/// Characteristic `p` and `r -> r^p` surjective.
pub fn is_semiperfect(ring: &RingHandle, p: u64) -> Result<bool> {
    if ring.characteristic() != p {
        return Ok(false);
    }
    Ok(frobenius_image(ring, p)?.into_iter().all(|h| h))
}

/// Least element that is not a `p`-th power, if any.
fn non_pth_power(ring: &RingHandle, p: u64) -> Result<Option<Elem>> {
    let hit = frobenius_image(ring, p)?;
    Ok(ring.elements()?.find(|r| !hit[r.index()]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub reduced: bool,
    pub domain: bool,
    pub field: bool,
    pub perfect: bool,
    pub semiperfect: bool,
    pub preduced: bool,
    pub local: bool,
}

impl Flags {
    pub fn get(&self, name: &str) -> Option<bool> {
        Some(match name {
            "reduced" => self.reduced,
            "domain" => self.domain,
            "field" => self.field,
            "perfect" => self.perfect,
            "semiperfect" => self.semiperfect,
            "preduced" => self.preduced,
            "local" => self.local,
            _ => return None,
        })
    }

    pub const NAMES: [&'static str; 7] = [
        "reduced",
        "domain",
        "field",
        "perfect",
        "semiperfect",
        "preduced",
        "local",
    ];

    /// Violated implication, if any, among
    /// field => domain => reduced => preduced and perfect => semiperfect.
    pub fn lattice_violation(&self) -> Option<&'static str> {
        if self.field && !self.domain {
            Some("field => domain")
        } else if self.domain && !self.reduced {
            Some("domain => reduced")
        } else if self.reduced && !self.preduced {
            Some("reduced => preduced")
        } else if self.perfect && !self.semiperfect {
            Some("perfect => semiperfect")
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub ring: RingHandle,
    pub spec: String,
    pub p: u64,
    pub characteristic: u64,
    pub flags: Flags,
    pub witnesses: BTreeMap<&'static str, Elem>,
}

impl PropertyReport {
    /// Re-checks that every witness violates its property.
    pub fn witnesses_hold(&self) -> bool {
        let r = &self.ring;
        let p = self.p;
        self.witnesses.iter().all(|(&flag, &w)| match flag {
            "reduced" => w != Elem::ZERO && r.is_nilpotent(w),
            "domain" => {
                w != Elem::ZERO
                    && r.all_elements()
                        .any(|b| b != Elem::ZERO && r.mul(w, b) == Elem::ZERO)
            }
            "field" => w != Elem::ZERO && !r.is_unit(w),
            "preduced" => {
                w != Elem::ZERO && r.scale(p, w) == Elem::ZERO && r.pow(w, p) == Elem::ZERO
            }
            "perfect" | "semiperfect" => r.all_elements().all(|s| r.pow(s, p) != w),
            "local" => r.mul(w, w) == w && w != r.zero() && w != r.one(),
            _ => false,
        })
    }

    pub fn to_json(&self) -> Value {
        let witnesses: serde_json::Map<String, Value> = self
            .witnesses
            .iter()
            .map(|(k, &w)| {
                (
                    k.to_string(),
                    serde_json::json!({
                        "element": self.ring.format(w),
                        "payload": self.ring.payload(w),
                    }),
                )
            })
            .collect();
        serde_json::json!({
            "ring": self.spec,
            "p": self.p,
            "characteristic": self.characteristic,
            "order": self.ring.order(),
            "flags": self.flags,
            "witnesses": witnesses,
        })
    }
}

/// Decides every flag exhaustively. The label is the ring-spec string to report.
pub fn classify(ring: &RingHandle, p: u64, label: &str) -> Result<PropertyReport> {
    ring.check_cap(crate::ring::DEFAULT_ENUMERATION_CAP)?;
    let mut witnesses = BTreeMap::new();
    let mut flag = |name: &'static str, (value, w): (bool, Option<Elem>)| {
        if let (false, Some(w)) = (value, w) {
            witnesses.insert(name, w);
        }
        value
    };
    let reduced = flag("reduced", is_reduced(ring)?);
    let domain = flag("domain", is_domain(ring)?);
    let field = flag("field", is_field(ring)?);
    let preduced = flag("preduced", is_preduced(ring, p)?);
    let local = flag("local", is_local(ring)?);
    let char_p = ring.characteristic() == p;
    let missing = if char_p { non_pth_power(ring, p)? } else { None };
    let perfect = flag("perfect", (is_perfect(ring, p)?, missing));
    let semiperfect = flag("semiperfect", (is_semiperfect(ring, p)?, missing));
    if perfect != semiperfect {
        return Err(Error::Verification(
            "Frobenius of a finite ring is surjective but not injective".into(),
        ));
    }
    let flags = Flags {
        reduced,
        domain,
        field,
        perfect,
        semiperfect,
        preduced,
        local,
    };
    if let Some(rule) = flags.lattice_violation() {
        return Err(Error::Verification(format!("implication {rule} fails")));
    }
    let report = PropertyReport {
        ring: ring.clone(),
        spec: label.to_string(),
        p,
        characteristic: ring.characteristic(),
        flags,
        witnesses,
    };
    if !report.witnesses_hold() {
        return Err(Error::Verification("a witness does not violate its flag".into()));
    }
    Ok(report)
}
