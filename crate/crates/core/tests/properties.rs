use std::collections::HashMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use witt_core::poly::Monomial;
use witt_core::{Elem, IntPolynomial, RingHandle, WittRing, WittVector};

fn ring_list() -> Vec<RingHandle> {
    let z = |m| RingHandle::zmod(m).unwrap();
    let mut out: Vec<RingHandle> = (1..=16).map(z).collect();
    out.push(RingHandle::poly_quotient(&z(2), &[Elem(1), Elem(1), Elem(1)], "x").unwrap());
    out.push(RingHandle::poly_quotient(&z(4), &[Elem(0), Elem(0), Elem(1)], "x").unwrap());
    out.push(RingHandle::poly_quotient(&z(3), &[Elem(0), Elem(0), Elem(1)], "x").unwrap());
    out.push(RingHandle::product(&z(2), &z(3)).unwrap());
    out.push(RingHandle::product(&z(4), &z(2)).unwrap());
    out
}

fn ring_and_elems(k: usize) -> impl Strategy<Value = (RingHandle, Vec<Elem>)> {
    let rings = ring_list();
    (0..rings.len(), prop::collection::vec(any::<u32>(), k)).prop_map(move |(i, raw)| {
        let r = rings[i].clone();
        let elems = raw.iter().map(|&x| Elem(x % r.order() as u32)).collect();
        (r, elems)
    })
}

const VARS: [&str; 3] = ["X0", "X1", "Y0"];

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -20i64..20), 0..6).prop_map(|terms| {
        IntPolynomial::from_terms(
            VARS.iter().map(|s| s.to_string()).collect(),
            terms
                .into_iter()
                .map(|((a, b, c), k)| (Monomial::new(vec![a, b, c]), BigInt::from(k))),
        )
    })
}

fn eval(f: &IntPolynomial, ring: &RingHandle, vals: &HashMap<String, Elem>) -> Elem {
    let values: Vec<Elem> = f.variables().iter().map(|v| vals[v]).collect();
    f.evaluate_raw(ring, &values)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((r, e) in ring_and_elems(3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(a, r.one()), a);
        prop_assert_eq!(r.add(a, r.zero()), a);
    }

    #[test]
    fn payloads_round_trip((r, e) in ring_and_elems(1)) {
        prop_assert_eq!(r.from_payload(&r.payload(e[0])), Some(e[0]));
    }

    #[test]
    fn polynomial_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &IntPolynomial::one(), f.clone());
    }

    #[test]
    fn exact_division_round_trip(f in poly(), k in 1i64..50) {
        let k = BigInt::from(k);
        prop_assert_eq!(f.scale(&k).exact_div_int(&k).unwrap(), f);
    }

    #[test]
    fn serial_round_trip(f in poly()) {
        prop_assert_eq!(IntPolynomial::from_serial(&f.to_serial()).unwrap(), f);
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in poly(), g in poly(), (r, e) in ring_and_elems(3)) {
        let vals: HashMap<String, Elem> =
            VARS.iter().map(|s| s.to_string()).zip(e.iter().copied()).collect();
        let sum = eval(&(&f + &g), &r, &vals);
        prop_assert_eq!(sum, r.add(eval(&f, &r, &vals), eval(&g, &r, &vals)));
        let prod = eval(&(&f * &g), &r, &vals);
        prop_assert_eq!(prod, r.mul(eval(&f, &r, &vals), eval(&g, &r, &vals)));
    }

    #[test]
    fn substitution_composes_with_evaluation(f in poly(), g in poly(), (r, e) in ring_and_elems(3)) {
        let vals: HashMap<String, Elem> =
            VARS.iter().map(|s| s.to_string()).zip(e.iter().copied()).collect();
        let assign: HashMap<String, IntPolynomial> = VARS
            .iter()
            .map(|s| (s.to_string(), if *s == "X0" { g.clone() } else { IntPolynomial::var(s) }))
            .collect();
        let composed = f.substitute(&assign).unwrap();
        let mut inner = vals.clone();
        inner.insert("X0".into(), eval(&g, &r, &vals));
        prop_assert_eq!(eval(&composed, &r, &vals), eval(&f, &r, &inner));
    }
}

fn witt_case() -> impl Strategy<Value = (WittRing, Vec<Vec<Elem>>)> {
    let rings = ring_list();
    (0..rings.len(), prop::sample::select(vec![2u64, 3]), 1usize..4,
     prop::collection::vec(prop::collection::vec(any::<u32>(), 3), 3))
        .prop_map(move |(i, p, n, raw)| {
            let r = rings[i].clone();
            let w = WittRing::new(&r, p, n).unwrap();
            let vs = raw
                .iter()
                .map(|c| c[..n].iter().map(|&x| Elem(x % r.order() as u32)).collect())
                .collect();
            (w, vs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witt_ring_axioms((w, vs) in witt_case()) {
        let x = w.from_coords(vs[0].clone()).unwrap();
        let y = w.from_coords(vs[1].clone()).unwrap();
        let z = w.from_coords(vs[2].clone()).unwrap();
        let add = |a: &WittVector, b: &WittVector| -> WittVector { w.add(a, b).unwrap() };
        let mul = |a: &WittVector, b: &WittVector| -> WittVector { w.mul(a, b).unwrap() };
        prop_assert_eq!(add(&x, &y), add(&y, &x));
        prop_assert_eq!(mul(&x, &y), mul(&y, &x));
        prop_assert_eq!(add(&add(&x, &y), &z), add(&x, &add(&y, &z)));
        prop_assert_eq!(mul(&mul(&x, &y), &z), mul(&x, &mul(&y, &z)));
        prop_assert_eq!(mul(&x, &add(&y, &z)), add(&mul(&x, &y), &mul(&x, &z)));
        prop_assert!(add(&x, &w.neg(&x).unwrap()).is_zero());
        prop_assert_eq!(mul(&x, &w.one()), x.clone());
    }

    #[test]
    fn witt_ghost_is_additive_and_multiplicative((w, vs) in witt_case()) {
        let x = w.from_coords(vs[0].clone()).unwrap();
        let y = w.from_coords(vs[1].clone()).unwrap();
        let r = w.base();
        let (gx, gy) = (w.ghost(&x).unwrap(), w.ghost(&y).unwrap());
        let gs = w.ghost(&w.add(&x, &y).unwrap()).unwrap();
        let gp = w.ghost(&w.mul(&x, &y).unwrap()).unwrap();
        for i in 0..w.n() {
            prop_assert_eq!(gs[i], r.add(gx[i], gy[i]));
            prop_assert_eq!(gp[i], r.mul(gx[i], gy[i]));
        }
    }

    #[test]
    fn witt_index_round_trip((w, vs) in witt_case()) {
        let x = w.from_coords(vs[0].clone()).unwrap();
        prop_assert_eq!(w.element_at(w.index_of(&x)), x.clone());
        prop_assert_eq!(w.from_payload(&w.payload(&x)).unwrap(), x);
    }
}
