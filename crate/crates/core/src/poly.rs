//! Sparse multivariate polynomials over the integers.
//!
//! Variables are named strings ordered naturally (`X2 < X10 < Y0`). A polynomial
//! only lists the variables that occur in it, so equality is structural.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, RingElement, RingHandle};

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial {
            degree: exponents.iter().sum(),
            exponents,
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

fn var_key(name: &str) -> (&str, u64, &str) {
    let split = name
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map(|(i, _)| i)
        .unwrap_or(name.len());
    let (prefix, digits) = name.split_at(split);
    (prefix, digits.parse().unwrap_or(0), name)
}

pub fn compare_vars(a: &str, b: &str) -> Ordering {
    var_key(a).cmp(&var_key(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_terms(Vec::new(), [(Monomial::new(Vec::new()), c.into())])
    }

    pub fn var(name: &str) -> Self {
        Self::from_terms(
            vec![name.to_string()],
            [(Monomial::new(vec![1]), BigInt::one())],
        )
    }

    /// `coeff * prod vars[i]^exps[i]`.
    pub fn monomial(coeff: impl Into<BigInt>, powers: &[(&str, u32)]) -> Self {
        let mut p = Self::constant(coeff);
        for &(v, e) in powers {
            p = &p * &Self::var(v).pow(e);
        }
        p
    }

    /// Builds a polynomial from terms over `vars`, summing duplicate monomials,
    /// dropping zero coefficients and unused variables.
    pub fn from_terms(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.exponents.len(), vars.len(), "monomial arity mismatch");
            *acc.entry(m.exponents).or_default() += c;
        }
        Self::normalize(vars, acc)
    }

    fn normalize(vars: Vec<String>, acc: HashMap<Vec<u32>, BigInt>) -> Self {
        let mut used = vec![false; vars.len()];
        let live: Vec<(Vec<u32>, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (e, _) in &live {
            for (u, &x) in used.iter_mut().zip(e) {
                *u |= x > 0;
            }
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        let mut order: Vec<usize> = keep.clone();
        order.sort_by(|&a, &b| compare_vars(&vars[a], &vars[b]));
        let new_vars = order.iter().map(|&i| vars[i].clone()).collect();
        let terms = live
            .into_iter()
            .map(|(e, c)| (Monomial::new(order.iter().map(|&i| e[i]).collect()), c))
            .collect();
        IntPolynomial {
            vars: new_vars,
            terms,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree).max().unwrap_or(0)
    }

    /// Coefficient of `prod vars^exps` (missing variables have exponent 0).
    pub fn coefficient(&self, powers: &[(&str, u32)]) -> BigInt {
        let mut exps = vec![0; self.vars.len()];
        for &(v, e) in powers {
            match self.vars.iter().position(|x| x == v) {
                Some(i) => exps[i] = e,
                None if e == 0 => {}
                None => return BigInt::zero(),
            }
        }
        self.terms
            .get(&Monomial::new(exps))
            .cloned()
            .unwrap_or_default()
    }

    /// Exponent vectors of `self` re-indexed over `vars` (a superset).
    fn lift_to(&self, vars: &[String]) -> Vec<(Vec<u32>, &BigInt)> {
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (i, &x) in m.exponents.iter().enumerate() {
                    e[pos[i]] = x;
                }
                (e, c)
            })
            .collect()
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort_by(|a, b| compare_vars(a, b));
        vars
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let vars = self.union_vars(other);
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (e, c) in self.lift_to(&vars) {
            *acc.entry(e).or_default() += c;
        }
        for (e, c) in other.lift_to(&vars) {
            let slot = acc.entry(e).or_default();
            if negate_other {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Self::normalize(vars, acc)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let vars = self.union_vars(other);
        let a = self.lift_to(&vars);
        let b = other.lift_to(&vars);
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::with_capacity(a.len() * b.len() / 2);
        let mut key = vec![0u32; vars.len()];
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                for i in 0..key.len() {
                    key[i] = ea[i] + eb[i];
                }
                let prod = *ca * *cb;
                match acc.get_mut(&key) {
                    Some(slot) => *slot += prod,
                    None => {
                        acc.insert(key.clone(), prod);
                    }
                }
            }
        }
        Self::normalize(vars, acc)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn try_pow(&self, exp: i64) -> Result<Self> {
        let e = u32::try_from(exp).map_err(|_| Error::NegativeExponent(exp))?;
        Ok(self.pow(e))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// `g` with `k * g = self`; fails if some coefficient is not divisible by `k`.
    pub fn exact_div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::NonDivisible {
                coefficient: "any".into(),
                divisor: "0".into(),
            });
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(Error::NonDivisible {
                    coefficient: c.to_string(),
                    divisor: k.to_string(),
                });
            }
            terms.insert(m.clone(), q);
        }
        Ok(IntPolynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Whether every coefficient is divisible by `k`.
    pub fn divisible_by(&self, k: &BigInt) -> bool {
        self.terms.values().all(|c| (c % k).is_zero())
    }

    /// Replaces every variable by the assigned polynomial.
    pub fn substitute(&self, assignment: &HashMap<String, IntPolynomial>) -> Result<Self> {
        let images: Vec<&IntPolynomial> = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let mut powers: Vec<Vec<IntPolynomial>> = images
            .iter()
            .map(|&g| vec![Self::one(), g.clone()])
            .collect();
        let mut result = Self::zero();
        for (m, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for (i, &e) in m.exponents.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            result = &result + &term;
        }
        Ok(result)
    }

    /// Image under the ring map `Z[vars] -> R` extending `assignment`.
    pub fn evaluate_in_ring(
        &self,
        ring: &RingHandle,
        assignment: &HashMap<String, RingElement>,
    ) -> Result<RingElement> {
        let values: Vec<Elem> = self
            .vars
            .iter()
            .map(|v| {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))?;
                if !x.ring().same_ring(ring) {
                    return Err(Error::MismatchedParents);
                }
                Ok(x.value())
            })
            .collect::<Result<_>>()?;
        Ok(ring.element(self.evaluate_raw(ring, &values)))
    }

    /// Evaluation with values given positionally for [`IntPolynomial::variables`].
    pub fn evaluate_raw(&self, ring: &RingHandle, values: &[Elem]) -> Elem {
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = ring.int_big(c);
            for (i, &e) in m.exponents.iter().enumerate() {
                if e > 0 {
                    t = ring.mul(t, ring.pow(values[i], e as u64));
                }
            }
            acc = ring.add(acc, t);
        }
        acc
    }

    pub fn to_serial(&self) -> SerialPoly {
        SerialPoly {
            variables: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| SerialTerm {
                    exponents: m.exponents.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_serial(s: &SerialPoly) -> Result<Self> {
        let mut terms = Vec::with_capacity(s.terms.len());
        for t in &s.terms {
            if t.exponents.len() != s.variables.len() {
                return Err(Error::Corrupt("exponent arity mismatch".into()));
            }
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| Error::Corrupt(format!("bad coefficient {:?}", t.coeff)))?;
            terms.push((Monomial::new(t.exponents.clone()), c));
        }
        Ok(Self::from_terms(s.variables.clone(), terms))
    }
}

/// Wire form: `{variables, terms: [{exponents, coeff}]}` in canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialPoly {
    pub variables: Vec<String>,
    pub terms: Vec<SerialTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialTerm {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> IntPolynomial {
        self.add_impl(rhs, false)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: Self) -> IntPolynomial {
        self.add_impl(rhs, true)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> IntPolynomial {
        self.mul_impl(rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .exponents
                .iter()
                .zip(&self.vars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{abs}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
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
    fn arithmetic_examples() {
        let (x, y) = (v("X"), v("Y"));
        let sq = (&x + &y).pow(2);
        let expected = &(&x.pow(2) + &(&c(2) * &(&x * &y))) + &y.pow(2);
        assert_eq!(sq, expected);

        let f = &v("X0") - &(&c(2) * &v("X1"));
        assert_eq!(-&f, &(-&v("X0")) + &(&c(2) * &v("X1")));
        assert!((&v("X0") * &IntPolynomial::zero()).is_zero());
        assert!(matches!(x.try_pow(-1), Err(Error::NegativeExponent(-1))));
    }

    #[test]
    fn natural_variable_order() {
        let p = &(&v("X10") + &v("Y0")) + &v("X2");
        assert_eq!(p.variables(), ["X2", "X10", "Y0"]);
        assert_eq!(p.to_string(), "X2 + X10 + Y0");
    }

    #[test]
    fn substitution() {
        let (x, y) = (v("X"), v("Y"));
        let mut a = HashMap::new();
        a.insert("X".to_string(), &x + &y);
        assert_eq!(x.pow(2).substitute(&a).unwrap(), (&x + &y).pow(2));

        let mut id = HashMap::new();
        id.insert("X0".to_string(), v("X0"));
        assert_eq!(v("X0").substitute(&id).unwrap(), v("X0"));

        let f = &v("X0") - &(&c(2) * &v("X1"));
        let mut a = HashMap::new();
        a.insert("X0".to_string(), &c(2) * &v("X1"));
        a.insert("X1".to_string(), v("X1"));
        assert!(f.substitute(&a).unwrap().is_zero());

        let missing = HashMap::new();
        assert!(matches!(f.substitute(&missing), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn exact_division() {
        let f = &(&c(2) * &v("X")) + &(&c(4) * &v("Y"));
        let g = &v("X") + &(&c(2) * &v("Y"));
        assert_eq!(f.exact_div_int(&BigInt::from(2)).unwrap(), g);
        let h = &(&c(2) * &v("X")) + &(&c(3) * &v("Y"));
        assert!(matches!(
            h.exact_div_int(&BigInt::from(2)),
            Err(Error::NonDivisible { .. })
        ));
        assert!(IntPolynomial::zero()
            .exact_div_int(&BigInt::from(7))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn ring_evaluation() {
        let z6 = RingHandle::zmod(6).unwrap();
        let f = &v("X0") * &v("Y0");
        let mut a = HashMap::new();
        a.insert("X0".to_string(), z6.element(Elem(4)));
        a.insert("Y0".to_string(), z6.element(Elem(5)));
        assert_eq!(f.evaluate_in_ring(&z6, &a).unwrap().value(), Elem(2));
        assert_eq!(
            c(7).evaluate_in_ring(&z6, &HashMap::new()).unwrap().value(),
            Elem(1)
        );

        let f2 = RingHandle::zmod(2).unwrap();
        let s1 = &(&v("X1") + &v("Y1")) - &(&v("X0") * &v("Y0"));
        let ones: HashMap<String, RingElement> = ["X0", "X1", "Y0", "Y1"]
            .iter()
            .map(|n| (n.to_string(), f2.element(Elem(1))))
            .collect();
        assert_eq!(s1.evaluate_in_ring(&f2, &ones).unwrap().value(), Elem(1));

        let z4 = RingHandle::zmod(4).unwrap();
        let mut wrong = HashMap::new();
        wrong.insert("X".to_string(), z4.element(Elem(1)));
        assert_eq!(
            v("X").evaluate_in_ring(&z6, &wrong),
            Err(Error::MismatchedParents)
        );
    }

    #[test]
    fn serial_round_trip() {
        let f = &(&v("X0") - &(&c(2) * &v("X1"))).pow(3) + &c(-5);
        let s = f.to_serial();
        assert_eq!(IntPolynomial::from_serial(&s).unwrap(), f);
        let json = serde_json::to_string(&s).unwrap();
        let back: SerialPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
