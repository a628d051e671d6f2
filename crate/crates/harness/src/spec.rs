//! The ring-spec mini-language:
//!
//! ```text
//! ring := "Z/" INT | ring "[" VAR "]/(" poly ")" | "GF(" INT ")" | "product(" ring "," ring ")"
//! ```
//!
//! `poly` is a monic polynomial in `VAR` with integer-literal coefficients,
//! for example `x^2+x+1`, `x^3-x` or `2*x^2+3x+1` (the `*` is optional).

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;
use witt_core::arith::prime_power;
use witt_core::ring::coefficients_in;
use witt_core::{Elem, RingHandle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("modulus {0} is not monic over its base ring")]
    NonMonic(String),

    #[error("GF({0}): argument is not a prime power")]
    NotPrimePower(u64),

    #[error(transparent)]
    Ring(#[from] witt_core::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Zmod(u64),
    Gf(u64),
    /// `base[var]/(f)`; `modulus` lists the coefficients of `f` from degree 0 up.
    Poly {
        base: Box<RingSpec>,
        var: String,
        modulus: Vec<i64>,
    },
    Product(Box<RingSpec>, Box<RingSpec>),
}

impl RingSpec {
    pub fn parse(s: &str) -> Result<Self, SpecError> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.ring()?;
        if p.pos != s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(spec)
    }

    /// Builds the ring, checking monicity after reduction into the base ring.
    pub fn build(&self) -> Result<RingHandle, SpecError> {
        match self {
            RingSpec::Zmod(m) => Ok(RingHandle::zmod(*m)?),
            RingSpec::Gf(q) => galois_field(*q),
            RingSpec::Poly { base, var, modulus } => {
                let b = base.build()?;
                let big: Vec<BigInt> = modulus.iter().map(|&c| BigInt::from(c)).collect();
                let coeffs = coefficients_in(&b, &big);
                match coeffs.last() {
                    Some(&lead) if lead == b.one() && coeffs.len() >= 2 => {
                        Ok(RingHandle::poly_quotient(&b, &coeffs, var)?)
                    }
                    _ => Err(SpecError::NonMonic(format_poly(modulus, var))),
                }
            }
            RingSpec::Product(a, b) => Ok(RingHandle::product(&a.build()?, &b.build()?)?),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(m) => write!(f, "Z/{m}"),
            RingSpec::Gf(q) => write!(f, "GF({q})"),
            RingSpec::Poly { base, var, modulus } => {
                write!(f, "{base}[{var}]/({})", format_poly(modulus, var))
            }
            RingSpec::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

/// Highest degree first, e.g. `x^2-x`, `2x+1`.
pub fn format_poly(coeffs: &[i64], var: &str) -> String {
    let mut out = String::new();
    for (d, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.unsigned_abs();
        if a != 1 || d == 0 {
            out.push_str(&a.to_string());
        }
        match d {
            0 => {}
            1 => out.push_str(var),
            _ => out.push_str(&format!("{var}^{d}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> SpecError {
        SpecError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), SpecError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{token}'")))
        }
    }

    fn int(&mut self) -> Result<u64, SpecError> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected an integer"));
        }
        let text = &self.rest()[..digits];
        let value = text.parse().map_err(|_| self.err("integer too large"))?;
        self.pos += digits;
        Ok(value)
    }

    fn ident(&mut self) -> Result<String, SpecError> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_alphabetic() || (i > 0 && (c.is_ascii_digit() || c == '_')))
            .count();
        if len == 0 {
            return Err(self.err("expected a variable name"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn ring(&mut self) -> Result<RingSpec, SpecError> {
        let mut spec = self.atom()?;
        while self.eat("[") {
            let var = self.ident()?;
            self.expect("]/(")?;
            let modulus = self.poly(&var)?;
            self.expect(")")?;
            spec = RingSpec::Poly {
                base: Box::new(spec),
                var,
                modulus,
            };
        }
        Ok(spec)
    }

    fn atom(&mut self) -> Result<RingSpec, SpecError> {
        if self.eat("Z/") {
            let start = self.pos;
            let m = self.int()?;
            if m == 0 {
                self.pos = start;
                return Err(self.err("modulus must be positive"));
            }
            Ok(RingSpec::Zmod(m))
        } else if self.eat("GF(") {
            let start = self.pos;
            let q = self.int()?;
            if prime_power(q).is_none() {
                self.pos = start;
                return Err(SpecError::NotPrimePower(q));
            }
            self.expect(")")?;
            Ok(RingSpec::Gf(q))
        } else if self.eat("product(") {
            let a = self.ring()?;
            self.expect(",")?;
            let b = self.ring()?;
            self.expect(")")?;
            Ok(RingSpec::Product(Box::new(a), Box::new(b)))
        } else {
            Err(self.err("expected 'Z/', 'GF(' or 'product('"))
        }
    }

    /// A sum of terms `[+-][INT][*]VAR[^INT]` or `[+-]INT`, returned as coefficients.
    fn poly(&mut self, var: &str) -> Result<Vec<i64>, SpecError> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut first = true;
        loop {
            let sign: i64 = if self.eat("-") {
                -1
            } else if self.eat("+") || first {
                1
            } else {
                break;
            };
            first = false;
            let has_coeff = self.rest().starts_with(|c: char| c.is_ascii_digit());
            let coeff = if has_coeff { self.int()? as i64 } else { 1 };
            let degree = if self.rest().starts_with(var) || (has_coeff && self.rest().starts_with('*')) {
                if has_coeff {
                    self.eat("*");
                }
                let at = self.pos;
                if !self.eat(var) {
                    return Err(self.err(&format!("expected '{var}'")));
                }
                if self
                    .rest()
                    .starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos = at;
                    return Err(self.err(&format!("unknown variable, expected '{var}'")));
                }
                if self.eat("^") {
                    self.int()? as usize
                } else {
                    1
                }
            } else if has_coeff {
                0
            } else {
                return Err(self.err("expected a term"));
            };
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, 0);
            }
            coeffs[degree] += sign * coeff;
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(coeffs)
    }
}

/// Monic irreducibility over `F_p` by trial division by all monic polynomials
/// of degree at most half.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for tail in 0..p.pow(d as u32) {
            let mut g: Vec<u64> = (0..d).map(|i| tail / p.pow(i as u32) % p).collect();
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &c) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
        }
        r.pop();
    }
    r
}

/// The least monic irreducible polynomial of degree `k` over `F_p`, ordering
/// candidates lexicographically by coefficients from degree `k-1` down to 0.
pub fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    for code in 0..p.pow(k as u32) {
        // Digit 0 of `code` (most significant) is the degree k-1 coefficient.
        let mut f = vec![0u64; k + 1];
        for i in 0..k {
            f[i] = code / p.pow(i as u32) % p;
        }
        f[k] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn galois_field(q: u64) -> Result<RingHandle, SpecError> {
    let (p, k) = prime_power(q).ok_or(SpecError::NotPrimePower(q))?;
    let base = RingHandle::zmod(p)?;
    if k == 1 {
        return Ok(base);
    }
    let f = least_irreducible(p, k);
    let coeffs: Vec<Elem> = f.iter().map(|&c| Elem(c as u32)).collect();
    Ok(RingHandle::poly_quotient(&base, &coeffs, "x")?)
}
