//! Ideals, quotients, localizations and the local decomposition of a finite ring.

use std::collections::{BTreeSet, HashMap};

use super::{Cosets, Elem, RingHandle, RingMap};
use crate::arith::valuation;
use crate::error::{Error, Result};

/// The ideal generated by `gens`: the additive closure of all multiples `g * r`,
/// in canonical order.
pub fn ideal_closure(ring: &RingHandle, gens: &[Elem]) -> Result<Vec<Elem>> {
    let elements: Vec<Elem> = ring.elements()?.collect();
    let multiples: BTreeSet<Elem> = gens
        .iter()
        .flat_map(|&g| elements.iter().map(move |&r| ring.mul(g, r)))
        .filter(|&m| m != Elem::ZERO)
        .collect();
    let mut seen = vec![false; ring.order() as usize];
    seen[0] = true;
    let mut frontier = vec![Elem::ZERO];
    while let Some(x) = frontier.pop() {
        for &m in &multiples {
            let y = ring.add(x, m);
            if !seen[y.index()] {
                seen[y.index()] = true;
                frontier.push(y);
            }
        }
    }
    Ok(elements.into_iter().filter(|x| seen[x.index()]).collect())
}

/// `R / (gens)` with its projection.
pub fn quotient_by_ideal(ring: &RingHandle, gens: &[Elem]) -> Result<(RingHandle, RingMap)> {
    let ideal = ideal_closure(ring, gens)?;
    Ok(quotient_with(ring, gens.to_vec(), ideal, None))
}

fn quotient_with(
    ring: &RingHandle,
    gens: Vec<Elem>,
    ideal: Vec<Elem>,
    at: Option<Elem>,
) -> (RingHandle, RingMap) {
    let cosets = Cosets::new(ring.clone(), gens, ideal);
    let images: Vec<Elem> = ring.all_elements().map(|x| cosets.label(x)).collect();
    let quotient = RingHandle::from_cosets(cosets, at);
    let map = RingMap::from_images(ring.clone(), quotient.clone(), images);
    (quotient, map)
}

/// Returns `(a, d)` with `d` minimal such that `s^a = s^(a+d)`, `a` minimal for that `d`.
pub fn localization_exponents(ring: &RingHandle, s: Elem) -> (u64, u64) {
    let mut first_seen = HashMap::new();
    let mut power = ring.one();
    let mut k = 0u64;
    loop {
        if let Some(&a) = first_seen.get(&power) {
            return (a, k - a);
        }
        first_seen.insert(power, k);
        power = ring.mul(power, s);
        k += 1;
    }
}

/// `R[s^-1]` realised as `R / (1 - s^l)`; `l` must be a multiple of the period
/// `d` with `l >= a` (see [`localization_exponents`]), which makes `s^l` idempotent.
pub fn localize_at_exponent(ring: &RingHandle, s: Elem, l: u64) -> Result<(RingHandle, RingMap)> {
    let (a, d) = localization_exponents(ring, s);
    if l < a || !l.is_multiple_of(d) {
        return Err(Error::InvalidRing(format!(
            "exponent {l} does not give an idempotent power (a={a}, d={d})"
        )));
    }
    let e = ring.pow(s, l);
    debug_assert_eq!(ring.mul(e, e), e);
    let gen = ring.sub(ring.one(), e);
    let ideal = ideal_closure(ring, &[gen])?;
    Ok(quotient_with(ring, vec![gen], ideal, Some(s)))
}

/// `R[s^-1]` with the localization map, using the least admissible exponent.
pub fn localize_at(ring: &RingHandle, s: Elem) -> Result<(RingHandle, RingMap)> {
    let (a, d) = localization_exponents(ring, s);
    let l = a.div_ceil(d) * d;
    localize_at_exponent(ring, s, l)
}

pub fn idempotents(ring: &RingHandle) -> Result<Vec<Elem>> {
    Ok(ring.elements()?.filter(|&e| ring.mul(e, e) == e).collect())
}

/// Nonzero idempotents with no nonzero idempotent strictly below them.
pub fn primitive_idempotents(ring: &RingHandle) -> Result<Vec<Elem>> {
    let all = idempotents(ring)?;
    Ok(all
        .iter()
        .copied()
        .filter(|&e| e != Elem::ZERO)
        .filter(|&e| {
            all.iter().all(|&f| {
                let fe = ring.mul(f, e);
                fe == Elem::ZERO || fe == e
            })
        })
        .collect())
}

/// The local factors `eR ~ R/(1-e)R`, one per primitive idempotent `e`.
pub fn local_factors(ring: &RingHandle) -> Result<Vec<(RingHandle, RingMap)>> {
    primitive_idempotents(ring)?
        .into_iter()
        .map(|e| quotient_by_ideal(ring, &[ring.sub(ring.one(), e)]))
        .collect()
}

/// `{r : p^m r = 0 for some m}`; `m = v_p(char R)` suffices.
pub fn p_torsion_ideal(ring: &RingHandle, p: u64) -> Result<Vec<Elem>> {
    let m = valuation(ring.characteristic(), p);
    let factor = p.pow(m);
    Ok(ring
        .elements()?
        .filter(|&r| ring.scale(factor, r) == Elem::ZERO)
        .collect())
}
