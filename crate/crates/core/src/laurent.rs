//! Integer Laurent polynomials in one variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coef: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coef, exp);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i32)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coef: i64, exp: i32) {
        if coef == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coef;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Substitutes `var ↦ var^k` (use `k = -1` for `q ↦ q⁻¹`).
    pub fn scale_exponents(&self, k: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (c, e * k)))
    }

    /// Divides every exponent by `d`; `None` if some exponent is not a
    /// multiple of `d`.
    pub fn divide_exponents(&self, d: i32) -> Option<Self> {
        if self.terms().any(|(e, _)| e % d != 0) {
            return None;
        }
        Some(Self::from_terms(self.terms().map(|(e, c)| (c, e / d))))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text form `c0*q^e0 + c1*q^e1 + ...` with ascending
    /// exponents; the zero polynomial prints as `0`.
    pub fn to_canonical_string(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(e, c)| format!("{c}*{var}^{e}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the canonical form written with variable `var`.
    pub fn parse_canonical(s: &str, var: &str) -> Result<Self, ParsePolyError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for term in s.split(" + ") {
            let bad = || ParsePolyError(term.to_string());
            let (c, rest) = term.split_once('*').ok_or_else(bad)?;
            let e = rest
                .strip_prefix(var)
                .and_then(|r| r.strip_prefix('^'))
                .ok_or_else(bad)?;
            let c: i64 = c.trim().parse().map_err(|_| bad())?;
            let e: i32 = e.trim().parse().map_err(|_| bad())?;
            p.add_term(c, e);
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed polynomial term `{0}`")]
pub struct ParsePolyError(pub String);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string("q"))
    }
}

impl FromStr for LaurentPoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_canonical(s, "q")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (-c, e)))
    }
}
