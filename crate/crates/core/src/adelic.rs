//! Exact height values over Q and the section-based height engine.
//!
//! Every height computed by this crate is a finite sum `sum_p c_p log p` with
//! rational coefficients. [`ExactHeight`] stores that sum as a map from primes
//! to coefficients, so independently derived formulas can be compared for
//! exact equality instead of up to floating-point noise.
//!
//! [`height_from_sections`] evaluates the height of a line bundle `L` from
//! the values `x_i` of sections generating `L^n` at a point:
//!
//! ```text
//! h_L(x) = sum_p ceil(-min_i ord_p(x_i) / n) log p  +  (1/n) log max_i |x_i|
//! ```
//!
//! The archimedean term carries no ceiling. That fixes the metric at the
//! infinite place once and for all and makes the weighted-projective and
//! classifying-stack closed forms hold exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, FactoredInt};
use crate::error::{domain, Result};

/// A height `sum_p c_p log p` with exact rational coefficients.
///
/// Zero coefficients are never stored, so equality of values is equality of
/// maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExactHeight {
    terms: BTreeMap<u128, BigRational>,
}

impl ExactHeight {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `log p`.
    pub fn log_prime(p: u128) -> Self {
        Self::zero().with_term(p, BigRational::one())
    }

    /// `log |n|` for a factored integer.
    pub fn log_abs(n: &FactoredInt) -> Self {
        let mut h = Self::zero();
        for &(p, e) in n.factors() {
            h.add_term(p, BigRational::from_integer(e.into()));
        }
        h
    }

    /// `log |n|`; zero for `n = +-1`.
    pub fn log_int(n: i128) -> Result<Self> {
        Ok(Self::log_abs(&arith::factor(n)?))
    }

    /// Build from `(prime, numerator, denominator)` triples.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u128, i64, i64)>,
    {
        let mut h = Self::zero();
        for (p, num, den) in terms {
            h.add_term(p, BigRational::new(num.into(), den.into()));
        }
        h
    }

    fn with_term(mut self, p: u128, c: BigRational) -> Self {
        self.add_term(p, c);
        self
    }

    /// Add `c log p` in place.
    pub fn add_term(&mut self, p: u128, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coefficient(&self, p: u128) -> BigRational {
        self.terms.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> &BTreeMap<u128, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply by a rational.
    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ExactHeight {
            terms: self.terms.iter().map(|(&p, c)| (p, c * q)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Floating-point value, for reporting only.
    pub fn value(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, c)| c.to_f64().unwrap_or(f64::NAN) * (p as f64).ln())
            .fold(0.0, |acc, x| acc + x)
    }
}

impl Add for &ExactHeight {
    type Output = ExactHeight;
    fn add(self, rhs: &ExactHeight) -> ExactHeight {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ExactHeight {
    type Output = ExactHeight;
    fn add(mut self, rhs: ExactHeight) -> ExactHeight {
        self += &rhs;
        self
    }
}

impl AddAssign<&ExactHeight> for ExactHeight {
    fn add_assign(&mut self, rhs: &ExactHeight) {
        for (&p, c) in &rhs.terms {
            self.add_term(p, c.clone());
        }
    }
}

impl Neg for ExactHeight {
    type Output = ExactHeight;
    fn neg(self) -> ExactHeight {
        ExactHeight {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Neg for &ExactHeight {
    type Output = ExactHeight;
    fn neg(self) -> ExactHeight {
        -self.clone()
    }
}

impl Sub for &ExactHeight {
    type Output = ExactHeight;
    fn sub(self, rhs: &ExactHeight) -> ExactHeight {
        self + &(-rhs)
    }
}

impl Sub for ExactHeight {
    type Output = ExactHeight;
    fn sub(self, rhs: ExactHeight) -> ExactHeight {
        &self - &rhs
    }
}

impl std::iter::Sum for ExactHeight {
    fn sum<I: Iterator<Item = ExactHeight>>(iter: I) -> Self {
        iter.fold(ExactHeight::zero(), |acc, h| acc + h)
    }
}

impl fmt::Display for ExactHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "log {p}")?;
            } else {
                write!(f, "{mag}*log {p}")?;
            }
        }
        Ok(())
    }
}

/// JSON scalar for a big integer: a number when it fits in `i64`,
/// otherwise a decimal string.
fn bigint_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => v.into(),
        None => n.to_string().into(),
    }
}

fn json_bigint(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn json_prime(v: &serde_json::Value) -> Option<u128> {
    match v {
        serde_json::Value::Number(n) => n.as_u64().map(u128::from).or_else(|| n.to_string().parse().ok()),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for ExactHeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(&p, c)| {
                let prime = match u64::try_from(p) {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => p.to_string().into(),
                };
                serde_json::Value::Array(vec![prime, bigint_json(c.numer()), bigint_json(c.denom())])
            })
            .collect();
        serde_json::json!({ "terms": terms, "value": self.value() }).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactHeight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        let terms = v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| de::Error::missing_field("terms"))?;
        let mut h = ExactHeight::zero();
        for t in terms {
            let parts = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| de::Error::custom("term must be [p, num, den]"))?;
            let p = json_prime(&parts[0]).ok_or_else(|| de::Error::custom("bad prime"))?;
            let num = json_bigint(&parts[1]).ok_or_else(|| de::Error::custom("bad numerator"))?;
            let den = json_bigint(&parts[2]).ok_or_else(|| de::Error::custom("bad denominator"))?;
            if den.is_zero() {
                return Err(de::Error::custom("zero denominator"));
            }
            h.add_term(p, BigRational::new(num, den));
        }
        Ok(h)
    }
}

/// A nonzero rational as a sign and a map prime -> integer exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredRational {
    negative: bool,
    exps: BTreeMap<u128, i64>,
}

impl FactoredRational {
    /// `num / den`; both must be nonzero.
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if num == 0 {
            return domain("section values must be nonzero");
        }
        if den == 0 {
            return domain("zero denominator");
        }
        let n = arith::factor(num)?;
        let d = arith::factor(den)?;
        let mut out = Self::from_int(&n);
        for &(p, e) in d.factors() {
            out.add_exp(p, -(e as i64));
        }
        out.negative = n.is_negative() != d.is_negative();
        Ok(out)
    }

    pub fn from_int(n: &FactoredInt) -> Self {
        FactoredRational {
            negative: n.is_negative(),
            exps: n.factors().iter().map(|&(p, e)| (p, e as i64)).collect(),
        }
    }

    pub fn integer(n: i128) -> Result<Self> {
        Self::new(n, 1)
    }

    fn add_exp(&mut self, p: u128, e: i64) {
        let entry = self.exps.entry(p).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.exps.remove(&p);
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return FactoredRational { negative: false, exps: BTreeMap::new() };
        }
        FactoredRational {
            negative: self.negative && k % 2 == 1,
            exps: self.exps.iter().map(|(&p, &e)| (p, e * k as i64)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.negative ^= other.negative;
        for (&p, &e) in &other.exps {
            out.add_exp(p, e);
        }
        out
    }

    pub fn ord(&self, p: u128) -> i64 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &BTreeMap<u128, i64> {
        &self.exps
    }

    /// `log |x|`.
    pub fn log_abs(&self) -> ExactHeight {
        let mut h = ExactHeight::zero();
        for (&p, &e) in &self.exps {
            h.add_term(p, BigRational::from_integer(e.into()));
        }
        h
    }

    /// `|x|` as numerator and denominator.
    fn magnitude(&self) -> (BigUint, BigUint) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&p, &e) in &self.exps {
            let pp = BigUint::from(p).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num *= pp;
            } else {
                den *= pp;
            }
        }
        (num, den)
    }

    /// Exact comparison of absolute values.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        let (a, b) = self.magnitude();
        let (c, d) = other.magnitude();
        (a * d).cmp(&(c * b))
    }
}

/// Height of `L` from the values of sections generating `L^n` at a point.
///
/// Finite places contribute `ceil(-min_i ord_p(x_i) / n) log p`; the
/// archimedean place contributes `(1/n) log max_i |x_i|`, expanded through
/// the factorization of the maximizing value.
pub fn height_from_sections(n: u32, values: &[FactoredRational]) -> Result<ExactHeight> {
    if n == 0 {
        return domain("section degree n must be positive");
    }
    let Some(first) = values.first() else {
        return domain("need at least one section value");
    };
    let primes: std::collections::BTreeSet<u128> =
        values.iter().flat_map(|v| v.exps.keys().copied()).collect();
    let n_big = BigInt::from(n);
    let mut h = ExactHeight::zero();
    for p in primes {
        let min_ord = values.iter().map(|v| v.ord(p)).min().unwrap_or(0);
        // ceil(-min / n)
        let c = BigInt::from(-min_ord).div_ceil(&n_big);
        h.add_term(p, BigRational::from_integer(c));
    }
    let largest = values
        .iter()
        .skip(1)
        .fold(first, |best, v| if v.cmp_abs(best) == Ordering::Greater { v } else { best });
    h += &largest.log_abs().scale(&BigRational::new(BigInt::one(), n_big));
    Ok(h)
}

/// A height split into its stable part and local discrepancies per prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightBreakdown {
    pub stable: ExactHeight,
    pub discrepancies: BTreeMap<u128, ExactHeight>,
    pub total: ExactHeight,
}

impl HeightBreakdown {
    /// Whether `total = stable + sum of discrepancies` holds exactly.
    pub fn is_consistent(&self) -> bool {
        let sum: ExactHeight = self.discrepancies.values().cloned().sum();
        self.total == &self.stable + &sum
    }
}

/// Assemble `total = stable + sum_p discrepancy_p`.
pub fn combine(stable: ExactHeight, discrepancies: BTreeMap<u128, ExactHeight>) -> HeightBreakdown {
    let mut total = stable.clone();
    for d in discrepancies.values() {
        total += d;
    }
    let discrepancies = discrepancies.into_iter().filter(|(_, d)| !d.is_zero()).collect();
    HeightBreakdown { stable, discrepancies, total }
}
