//! Check registry, one list per suite.

pub mod delta;
pub mod identities;
pub mod rings;

use crate::suite::{Check, Identity, RingCheck};

fn ids(v: Vec<Identity>) -> impl Iterator<Item = Check> {
    v.into_iter().map(Check::Identity)
}

fn rings(v: Vec<RingCheck>) -> impl Iterator<Item = Check> {
    v.into_iter().map(Check::Ring)
}

/// The checks of a corpus suite, in report order. `None` for unknown names and
/// for delta-ring, which has no corpus.
pub fn for_suite(name: &str) -> Option<Vec<Check>> {
    use self::rings as r;
    let checks: Vec<Check> = match name {
        "ghost-hom" => ids(identities::ghost_hom()).collect(),
        "fv-identities" => ids(identities::fv_identities()).collect(),
        "charp-identities" => ids(identities::charp_identities()).chain(rings(r::charp_ring_checks())).collect(),
        "torsion-location" => rings(r::torsion_checks()).chain(ids(identities::torsion_identities())).collect(),
        "reduced-shadow" => rings(r::reduced_checks()).collect(),
        "preduced-equivalences" => rings(r::preduced_checks()).collect(),
        "jideal" => rings(r::jideal_checks()).collect(),
        "localization" => rings(r::localization_checks()).collect(),
        "spectrum" => rings(r::spectrum_checks()).collect(),
        "noetherian-lemma" => rings(r::noetherian_checks()).collect(),
        "local-structure" => rings(r::local_structure_checks()).collect(),
        "ghost-bijection" => rings(r::ghost_bijection_checks()).collect(),
        "characteristic" => rings(r::characteristic_checks()).collect(),
        _ => return None,
    };
    Some(checks)
}
