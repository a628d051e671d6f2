//! Structure-polynomial tables on the full default grid.

use std::time::{Duration, Instant};

use witt_core::witt_poly::{congruent_mod, x_var};
use witt_core::{IntPolynomial, WittPolyTable};

#[test]
fn full_grid_generates_and_verifies() {
    let start = Instant::now();
    for (p, n) in [(2, 5), (3, 4), (5, 3)] {
        let t = WittPolyTable::generate(p, n).unwrap();
        t.verify().unwrap();
        let back = WittPolyTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
    assert!(start.elapsed() < Duration::from_secs(60));
}

#[test]
fn frobenius_reduces_to_power() {
    let t = WittPolyTable::generate(5, 3).unwrap();
    for (i, f) in t.frob().iter().enumerate() {
        assert!(congruent_mod(f, &IntPolynomial::var(&x_var(i)).pow(5), 5));
    }
}

#[test]
fn odd_negation_is_coordinatewise() {
    for (p, n) in [(3, 4), (5, 3)] {
        let t = WittPolyTable::generate(p, n).unwrap();
        for (i, f) in t.neg().iter().enumerate() {
            assert_eq!(f, &-&IntPolynomial::var(&x_var(i)));
        }
    }
}
