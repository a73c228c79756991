//! Projective lines over Q with stacky points at rational roots.
//!
//! A [`RootedLine`] carries linear forms `L_i = u_i X + v_i Y` whose zeros are
//! stacky points with stabilizer `mu_{m_i}`. The football `F(a, b)` is the
//! line rooted at `0 = {X = 0}` with order `a` and `inf = {Y = 0}` with
//! order `b`. A divisor `d[P] + sum n_i [P_i]` has rational degree
//! `d + sum n_i / m_i`.
//!
//! At a coprime point `(a : b)` the height splits as
//! `deg(D) log max(|a|, |b|)` plus, at each prime `p`, the discrepancy
//! `sum_i frac+(k_{i,p} n_i / m_i) log p` with `k_{i,p} = ord_p L_i(a, b)` and
//! `frac+(q) = ceil(q) - q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::adelic::{combine, ExactHeight, HeightBreakdown};
use crate::arith::{self, FactoredInt};
use crate::classifying::{bmun_height, PowerClass};
use crate::error::{domain, Error, Result};

/// A stacky root: the zero of `u X + v Y` with stabilizer of order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub u: i128,
    pub v: i128,
    pub order: u32,
}

impl Root {
    pub fn eval(&self, a: i128, b: i128) -> Result<i128> {
        self.u
            .checked_mul(a)
            .and_then(|x| self.v.checked_mul(b).and_then(|y| x.checked_add(y)))
            .ok_or(Error::Overflow("linear form"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootedLine {
    roots: Vec<Root>,
}

impl RootedLine {
    /// Forms are normalized to be primitive with a positive leading nonzero
    /// coefficient; proportional forms are rejected.
    pub fn new(roots: Vec<Root>) -> Result<Self> {
        let mut out: Vec<Root> = Vec::with_capacity(roots.len());
        for r in roots {
            if r.order < 2 {
                return domain(format!("root order must be >= 2, got {}", r.order));
            }
            let g = r.u.gcd(&r.v);
            if g == 0 {
                return domain("zero linear form");
            }
            let s = if r.u < 0 || (r.u == 0 && r.v < 0) { -g } else { g };
            let r = Root { u: r.u / s, v: r.v / s, order: r.order };
            if out.iter().any(|o| o.u == r.u && o.v == r.v) {
                return domain(format!("proportional roots ({}, {})", r.u, r.v));
            }
            out.push(r);
        }
        Ok(RootedLine { roots: out })
    }

    /// `P^1` with no stacky points.
    pub fn unrooted() -> Self {
        RootedLine { roots: Vec::new() }
    }

    /// `F(a, b)`: order `a` at `0 = {X = 0}`, order `b` at `inf = {Y = 0}`.
    pub fn football(a: u32, b: u32) -> Result<Self> {
        Self::new(vec![Root { u: 1, v: 0, order: a }, Root { u: 0, v: 1, order: b }])
    }

    /// The `(2,2,2)`-rooted line with roots at `0`, `-1` and `inf`.
    pub fn triple_two() -> Self {
        Self::new(vec![
            Root { u: 1, v: 0, order: 2 },
            Root { u: 1, v: 1, order: 2 },
            Root { u: 0, v: 1, order: 2 },
        ])
        .expect("fixed roots are valid")
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Factored `L_i(a, b)` for a normalized point off every root.
    fn evaluate(&self, a: i128, b: i128) -> Result<Vec<FactoredInt>> {
        self.roots
            .iter()
            .enumerate()
            .map(|(i, r)| match r.eval(a, b)? {
                0 => Err(Error::StackyPoint { root: i }),
                x => arith::factor(x),
            })
            .collect()
    }
}

/// `d [P] + sum_i n_i [P_i]`, aligned with the roots of a line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StackDivisor {
    pub generic: i64,
    pub stacky: Vec<i64>,
}

impl StackDivisor {
    pub fn new(generic: i64, stacky: Vec<i64>) -> Self {
        StackDivisor { generic, stacky }
    }

    pub fn zero(line: &RootedLine) -> Self {
        StackDivisor { generic: 0, stacky: vec![0; line.len()] }
    }

    fn check(&self, line: &RootedLine) -> Result<()> {
        if self.stacky.len() != line.len() {
            return domain(format!(
                "divisor has {} stacky coefficients but the line has {} roots",
                self.stacky.len(),
                line.len()
            ));
        }
        Ok(())
    }

    /// `d + sum n_i / m_i`.
    pub fn degree(&self, line: &RootedLine) -> Result<BigRational> {
        self.check(line)?;
        let mut deg = BigRational::from_integer(self.generic.into());
        for (n, r) in self.stacky.iter().zip(line.roots()) {
            deg += BigRational::new((*n).into(), r.order.into());
        }
        Ok(deg)
    }

    pub fn negated(&self) -> Self {
        StackDivisor { generic: -self.generic, stacky: self.stacky.iter().map(|n| -n).collect() }
    }
}

/// Divide out the gcd; `(0, 0)` is not a point.
pub fn normalize_point(a: i128, b: i128) -> Result<(i128, i128)> {
    let g = a.gcd(&b);
    if g == 0 {
        return domain("(0 : 0) is not a point of P^1");
    }
    Ok((a / g, b / g))
}

fn log_max(a: i128, b: i128) -> Result<ExactHeight> {
    ExactHeight::log_int(a.unsigned_abs().max(b.unsigned_abs()) as i128)
}

/// `ceil(q) - q`.
fn frac_plus(q: &BigRational) -> BigRational {
    q.ceil() - q
}

/// Height of a generic (non-root) point, split into stable part and
/// per-prime discrepancies.
pub fn generic_height(line: &RootedLine, d: &StackDivisor, point: (i128, i128)) -> Result<HeightBreakdown> {
    let deg = d.degree(line)?;
    let (a, b) = normalize_point(point.0, point.1)?;
    let values = line.evaluate(a, b)?;
    let stable = log_max(a, b)?.scale(&deg);
    let mut disc: BTreeMap<u128, ExactHeight> = BTreeMap::new();
    for ((val, root), &n) in values.iter().zip(line.roots()).zip(&d.stacky) {
        for &(p, k) in val.factors() {
            let q = BigRational::new(BigInt::from(k) * n, root.order.into());
            let f = frac_plus(&q);
            if !f.is_zero() {
                *disc.entry(p).or_insert_with(ExactHeight::zero) += &ExactHeight::log_prime(p).scale(&f);
            }
        }
    }
    Ok(combine(stable, disc))
}

/// Height of a type-1 point: the class `c` in `B mu_{m_i}` at root `i`.
/// Only the coefficient `n_i mod m_i` matters.
pub fn type1_height(line: &RootedLine, i: usize, c: &PowerClass, d: &StackDivisor) -> Result<ExactHeight> {
    d.check(line)?;
    let Some(root) = line.roots().get(i) else {
        return domain(format!("root index {i} out of range"));
    };
    if c.n() != root.order {
        return domain(format!("class lives in B mu_{} but root {i} has order {}", c.n(), root.order));
    }
    let j = d.stacky[i].rem_euclid(root.order as i64) as u32;
    if j == 0 {
        return Ok(ExactHeight::zero());
    }
    bmun_height(c, j)
}

/// Northcott criterion on `F(a, b)` for `D = d[P] + n[0] + m[inf]`.
pub fn northcott(a: u32, b: u32, d: i64, n: i64, m: i64) -> Result<bool> {
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return domain(format!("football orders must be coprime and positive, got ({a}, {b})"));
    }
    let deg = BigRational::from_integer(d.into())
        + BigRational::new(n.into(), a.into())
        + BigRational::new(m.into(), b.into());
    Ok(deg.is_positive() && n.gcd(&(a as i64)) == 1 && m.gcd(&(b as i64)) == 1)
}

/// `T = 2[P] + sum_i (1 - m_i)[P_i]`, of degree `2 - r + sum 1/m_i`.
pub fn tangent_divisor(line: &RootedLine) -> StackDivisor {
    StackDivisor {
        generic: 2,
        stacky: line.roots().iter().map(|r| 1 - r.order as i64).collect(),
    }
}

/// `sum_i (1/m_i) log Phi_{m_i}(L_i(a, b)) + deg(T) log max(|a|, |b|)`.
pub fn tangential_height(line: &RootedLine, point: (i128, i128)) -> Result<ExactHeight> {
    tangential_height_with(line, point, arith::power_free_part)
}

/// [`tangential_height`] with the power-free complement supplied by the
/// caller.
pub fn tangential_height_with<F>(line: &RootedLine, point: (i128, i128), phi: F) -> Result<ExactHeight>
where
    F: Fn(i128, u32) -> Result<u128>,
{
    let (a, b) = normalize_point(point.0, point.1)?;
    let mut h = log_max(a, b)?.scale(&tangent_divisor(line).degree(line)?);
    for (i, r) in line.roots().iter().enumerate() {
        let x = r.eval(a, b)?;
        if x == 0 {
            return Err(Error::StackyPoint { root: i });
        }
        let f = phi(x, r.order)?;
        let f = i128::try_from(f).map_err(|_| Error::Overflow("tangential_height"))?;
        h += &ExactHeight::log_int(f)?.scale(&BigRational::new(1.into(), r.order.into()));
    }
    Ok(h)
}

/// `sum log p` over primes where some `L_i(a, b)` has positive valuation not
/// divisible by `m_i`; each prime counted once.
pub fn rdisc(line: &RootedLine, point: (i128, i128)) -> Result<ExactHeight> {
    let (a, b) = normalize_point(point.0, point.1)?;
    let values = line.evaluate(a, b)?;
    let mut stacky = std::collections::BTreeSet::new();
    for (val, root) in values.iter().zip(line.roots()) {
        for &(p, k) in val.factors() {
            if k % root.order != 0 {
                stacky.insert(p);
            }
        }
    }
    Ok(stacky.into_iter().map(ExactHeight::log_prime).sum())
}

/// Expected deformation dimension `-h_{-T}(x) + rDisc(x)`.
pub fn edd(line: &RootedLine, point: (i128, i128)) -> Result<ExactHeight> {
    let canonical = tangent_divisor(line).negated();
    Ok(-generic_height(line, &canonical, point)?.total + rdisc(line, point)?)
}

/// Whether some prime divides two distinct `L_i(a, b)`. On such points `edd`
/// and the tangential height may differ by the bounded local terms at those
/// primes.
pub fn roots_share_prime(line: &RootedLine, point: (i128, i128)) -> Result<bool> {
    let (a, b) = normalize_point(point.0, point.1)?;
    let vals = line
        .roots()
        .iter()
        .map(|r| r.eval(a, b))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            if vals[i].gcd(&vals[j]) != 1 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
