//! The Frobenius lift on `Z[X0, Xn]` given by
//! `X0 -> (X0 - p^n Xn)^p + p^n Xn^p`, `Xn -> Xn^p`, and its δ-map
//! `δ(g) = (F(g) - g^p) / p`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, Monomial};

/// Grid on which the construction is checked by default.
pub const DELTA_GRID: [(u64, usize); 6] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusLift {
    p: u64,
    n: usize,
    low: String,
    high: String,
    images: HashMap<String, IntPolynomial>,
}

impl FrobeniusLift {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { value: p });
        }
        if n == 0 {
            return Err(Error::Unsupported { p, n });
        }
        let low = "X0".to_string();
        let high = format!("X{n}");
        let xn = IntPolynomial::var(&high);
        let pn = BigInt::from(p).pow(n as u32);
        let e = p as u32;
        let img_low = &(&IntPolynomial::var(&low) - &xn.scale(&pn)).pow(e) + &xn.pow(e).scale(&pn);
        let img_high = xn.pow(e);
        Ok(Self::with_images(p, n, img_low, img_high))
    }

    /// A lift with arbitrary images for `X0` and `Xn`, not checked in any way.
    pub fn with_images(p: u64, n: usize, low_image: IntPolynomial, high_image: IntPolynomial) -> Self {
        let low = "X0".to_string();
        let high = format!("X{n}");
        let images = HashMap::from([(low.clone(), low_image), (high.clone(), high_image)]);
        FrobeniusLift {
            p,
            n,
            low,
            high,
            images,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn low_var(&self) -> IntPolynomial {
        IntPolynomial::var(&self.low)
    }

    pub fn high_var(&self) -> IntPolynomial {
        IntPolynomial::var(&self.high)
    }

    pub fn image_of_low(&self) -> &IntPolynomial {
        &self.images[&self.low]
    }

    pub fn image_of_high(&self) -> &IntPolynomial {
        &self.images[&self.high]
    }

    /// `X0 - p^n Xn`.
    pub fn generator(&self) -> IntPolynomial {
        let pn = BigInt::from(self.p).pow(self.n as u32);
        &self.low_var() - &self.high_var().scale(&pn)
    }

    pub fn apply(&self, g: &IntPolynomial) -> Result<IntPolynomial> {
        if let Some(v) = g.variables().iter().find(|v| !self.images.contains_key(*v)) {
            return Err(Error::ForeignVariable(v.clone()));
        }
        let used: HashMap<String, IntPolynomial> = self
            .images
            .iter()
            .filter(|(k, _)| g.variables().contains(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        g.substitute(&used)
    }

    /// `(F(g) - g^p) / p`; `NonDivisible` means the lift is broken.
    pub fn delta(&self, g: &IntPolynomial) -> Result<IntPolynomial> {
        let diff = &self.apply(g)? - &g.pow(self.p as u32);
        diff.exact_div_int(&BigInt::from(self.p))
    }

    /// `F(g) = g^p mod p`.
    pub fn lifts_frobenius_on(&self, g: &IntPolynomial) -> Result<bool> {
        let diff = &self.apply(g)? - &g.pow(self.p as u32);
        Ok(diff.divisible_by(&BigInt::from(self.p)))
    }

    /// `δ(g+h) = δ(g) + δ(h) - sum_{0<i<p} (binom(p,i)/p) g^i h^(p-i)`.
    pub fn addition_law_holds(&self, g: &IntPolynomial, h: &IntPolynomial) -> Result<bool> {
        let p = self.p;
        let mut correction = IntPolynomial::zero();
        for i in 1..p {
            let c = binomial(BigInt::from(p), BigInt::from(i)) / BigInt::from(p);
            let term = (&g.pow(i as u32) * &h.pow((p - i) as u32)).scale(&c);
            correction = &correction + &term;
        }
        let lhs = self.delta(&(g + h))?;
        let rhs = &(&self.delta(g)? + &self.delta(h)?) - &correction;
        Ok(lhs == rhs)
    }

    /// `δ(gh) = g^p δ(h) + h^p δ(g) + p δ(g) δ(h)`.
    pub fn product_law_holds(&self, g: &IntPolynomial, h: &IntPolynomial) -> Result<bool> {
        let e = self.p as u32;
        let dg = self.delta(g)?;
        let dh = self.delta(h)?;
        let lhs = self.delta(&(g * h))?;
        let rhs = &(&(&g.pow(e) * &dh) + &(&h.pow(e) * &dg))
            + &(&dg * &dh).scale(&BigInt::from(self.p));
        Ok(lhs == rhs)
    }

    /// Random polynomial in `X0, Xn` of total degree at most `max_degree`.
    pub fn random_polynomial(&self, rng: &mut impl Rng, max_degree: u32) -> IntPolynomial {
        let vars = vec![self.low.clone(), self.high.clone()];
        let count = rng.gen_range(1..=5);
        let terms: Vec<(Monomial, BigInt)> = (0..count)
            .map(|_| {
                let a = rng.gen_range(0..=max_degree);
                let b = rng.gen_range(0..=max_degree - a);
                let c: i64 = rng.gen_range(-9..=9);
                (Monomial::new(vec![a, b]), BigInt::from(c))
            })
            .collect();
        IntPolynomial::from_terms(vars, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaFailure {
    pub check: String,
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub p: u64,
    pub n: usize,
    pub samples: usize,
    pub generator_delta: String,
    pub failures: Vec<DeltaFailure>,
}

impl ConstructionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Number of random polynomials checked per grid point.
pub const RANDOM_SAMPLES: usize = 100;

/// Checks the lift property and integrality of δ on variables, a sum, a
/// product and random polynomials of degree at most 4, then `δ(X0 - p^n Xn) = 0`.
pub fn verify_lift(lift: &FrobeniusLift, seed: u64) -> ConstructionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = lift.low_var();
    let xn = lift.high_var();
    let mut sample = vec![x0.clone(), xn.clone(), &x0 + &xn, &x0 * &xn];
    sample.extend((0..RANDOM_SAMPLES).map(|_| lift.random_polynomial(&mut rng, 4)));
    let mut failures = Vec::new();
    for g in &sample {
        match lift.lifts_frobenius_on(g) {
            Ok(true) => {}
            Ok(false) => failures.push(DeltaFailure {
                check: "lift".into(),
                input: g.to_string(),
                detail: "F(g) - g^p is not divisible by p".into(),
            }),
            Err(e) => failures.push(DeltaFailure {
                check: "lift".into(),
                input: g.to_string(),
                detail: e.to_string(),
            }),
        }
        if let Err(e) = lift.delta(g) {
            failures.push(DeltaFailure {
                check: "integral".into(),
                input: g.to_string(),
                detail: e.to_string(),
            });
        }
    }
    let gen = lift.generator();
    let generator_delta = match lift.delta(&gen) {
        Ok(d) => {
            if !d.is_zero() {
                failures.push(DeltaFailure {
                    check: "generator".into(),
                    input: gen.to_string(),
                    detail: format!("delta is {d}"),
                });
            }
            d.to_string()
        }
        Err(e) => {
            failures.push(DeltaFailure {
                check: "generator".into(),
                input: gen.to_string(),
                detail: e.to_string(),
            });
            "undefined".into()
        }
    };
    ConstructionReport {
        p: lift.p(),
        n: lift.n(),
        samples: sample.len(),
        generator_delta,
        failures,
    }
}

/// [`verify_lift`] for the standard lift at `(p, n)`.
pub fn verify_construction(p: u64, n: usize, seed: u64) -> Result<ConstructionReport> {
    Ok(verify_lift(&FrobeniusLift::new(p, n)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> IntPolynomial {
        IntPolynomial::var(name)
    }

    fn c(k: i64) -> IntPolynomial {
        IntPolynomial::constant(k)
    }

    #[test]
    fn apply_examples() {
        let l = FrobeniusLift::new(2, 1).unwrap();
        assert_eq!(l.apply(&v("X1")).unwrap(), v("X1").pow(2));
        assert_eq!(l.apply(&c(7)).unwrap(), c(7));
        let want = &(&v("X0") - &(&c(2) * &v("X1"))).pow(2) + &(&c(2) * &v("X1").pow(2));
        assert_eq!(l.apply(&v("X0")).unwrap(), want);
        assert!(matches!(l.apply(&v("Y0")), Err(Error::ForeignVariable(_))));
    }

    #[test]
    fn delta_examples() {
        for (p, n) in DELTA_GRID {
            let l = FrobeniusLift::new(p, n).unwrap();
            assert!(l.delta(&l.generator()).unwrap().is_zero(), "p={p} n={n}");
            assert!(l.delta(&c(1)).unwrap().is_zero());
        }
        let l = FrobeniusLift::new(2, 1).unwrap();
        let want = &(&c(-2) * &(&v("X0") * &v("X1"))) + &(&c(3) * &v("X1").pow(2));
        assert_eq!(l.delta(&v("X0")).unwrap(), want);
    }

    #[test]
    fn construction_examples() {
        assert!(verify_construction(2, 1, 0).unwrap().ok());
        assert!(verify_construction(3, 2, 0).unwrap().ok());
        let good = FrobeniusLift::new(2, 1).unwrap();
        let broken = FrobeniusLift::with_images(
            2,
            1,
            good.image_of_low() + &c(1),
            good.image_of_high().clone(),
        );
        let report = verify_lift(&broken, 0);
        assert!(!report.ok());
        assert!(report.failures.iter().any(|f| f.check == "lift" && f.input == "X0"));
    }

    #[test]
    fn delta_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2, 1), (3, 2)] {
            let l = FrobeniusLift::new(p, n).unwrap();
            for _ in 0..10 {
                let g = l.random_polynomial(&mut rng, 3);
                let h = l.random_polynomial(&mut rng, 3);
                assert!(l.addition_law_holds(&g, &h).unwrap());
                assert!(l.product_law_holds(&g, &h).unwrap());
            }
        }
    }
}
