//! Heights on weighted projective stacks `P(a_0, ..., a_k)` over Q.
//!
//! A rational point is a tuple of integers `(M_0 : ... : M_k)`, not all
//! zero, up to `M_i -> lambda^{a_i} M_i`. In minimal form no prime `p` has
//! `p^{a_i} | M_i` for every `i`, and then
//!
//! ```text
//! h_{O(1)}(M) = log max_i |M_i|^{1/a_i}.
//! ```

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::adelic::{height_from_sections, ExactHeight, FactoredRational};
use crate::arith;
use crate::error::{domain, Error, Result};

/// A point of a weighted projective stack in minimal form.
///
/// Only positive rescalings are applied when normalizing, so signs are
/// preserved; see [`WeightedPoint::canonical_sign`] for deduplication under
/// `lambda = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedPoint {
    weights: Vec<u32>,
    coords: Vec<i128>,
}

fn check_shape(weights: &[u32], coords: &[i128]) -> Result<()> {
    if weights.is_empty() {
        return domain("need at least one weight");
    }
    if weights.len() != coords.len() {
        return domain(format!("{} weights but {} coordinates", weights.len(), coords.len()));
    }
    if weights.iter().any(|&a| a == 0) {
        return domain("weights must be >= 1");
    }
    if coords.iter().all(|&m| m == 0) {
        return domain("coordinates must not all vanish");
    }
    Ok(())
}

/// Reduce to minimal form by dividing out every `p` with `p^{a_i} | M_i`
/// for all `i`.
pub fn minimal_form(weights: &[u32], coords: &[i128]) -> Result<WeightedPoint> {
    check_shape(weights, coords)?;
    let g = coords.iter().fold(0u128, |g, &m| g.gcd(&m.unsigned_abs()));
    let mut coords = coords.to_vec();
    for &(p, _) in arith::factor_u128(g).iter() {
        let e = coords
            .iter()
            .zip(weights)
            .filter(|(&m, _)| m != 0)
            .map(|(&m, &a)| arith::ord(m, p).map(|o| o / a))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .unwrap_or(0);
        if e == 0 {
            continue;
        }
        for (m, &a) in coords.iter_mut().zip(weights) {
            *m /= (p as i128).pow(e * a);
        }
    }
    Ok(WeightedPoint { weights: weights.to_vec(), coords })
}

impl WeightedPoint {
    pub fn new(weights: &[u32], coords: &[i128]) -> Result<Self> {
        minimal_form(weights, coords)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    /// `A = lcm(a_i)`.
    pub fn weight_lcm(&self) -> u32 {
        self.weights.iter().fold(1, |l, &a| l.lcm(&a))
    }

    /// The image under `lambda = -1`, i.e. `((-1)^{a_i} M_i)`.
    pub fn negated(&self) -> WeightedPoint {
        let coords = self
            .coords
            .iter()
            .zip(&self.weights)
            .map(|(&m, &a)| if a % 2 == 1 { -m } else { m })
            .collect();
        WeightedPoint { weights: self.weights.clone(), coords }
    }

    /// The lexicographically larger of the point and its `lambda = -1` image.
    /// Two minimal forms are the same rational point exactly when their
    /// canonical signs agree.
    pub fn canonical_sign(&self) -> WeightedPoint {
        let neg = self.negated();
        if neg.coords > self.coords {
            neg
        } else {
            self.clone()
        }
    }

    fn section_values(&self, degree: u32) -> Result<Vec<FactoredRational>> {
        self.coords
            .iter()
            .zip(&self.weights)
            .filter(|(&m, _)| m != 0)
            .map(|(&m, &a)| Ok(FactoredRational::from_int(&arith::factor(m)?).pow(degree / a)))
            .collect()
    }
}

/// Height for `O(1)` through the section engine with sections
/// `M_i^{A / a_i}` of `O(A)`.
pub fn height_o1(pt: &WeightedPoint) -> Result<ExactHeight> {
    height_oj(pt, 1)
}

/// Height for `O(j)` through sections `M_i^{jA / a_i}` of `O(j)^A`.
///
/// Stacky heights are not additive in the bundle, so this is not
/// `j * height_o1` in general.
pub fn height_oj(pt: &WeightedPoint, j: u32) -> Result<ExactHeight> {
    if j == 0 {
        return domain("twist j must be positive");
    }
    let a = pt.weight_lcm();
    let degree = j.checked_mul(a).ok_or(Error::Overflow("height_oj"))?;
    height_from_sections(a, &pt.section_values(degree)?)
}

/// `log max_i |M_i|^{1/a_i}` evaluated directly, without the engine.
pub fn closed_form_height(pt: &WeightedPoint) -> Result<ExactHeight> {
    let a = pt.weight_lcm();
    // compare |M_i|^{A/a_i}
    let mut best: Option<(BigUint, usize)> = None;
    for (i, (&m, &w)) in pt.coords.iter().zip(&pt.weights).enumerate() {
        if m == 0 {
            continue;
        }
        let key = BigUint::from(m.unsigned_abs()).pow(a / w);
        if best.as_ref().map_or(true, |(b, _)| key.cmp(b) == Ordering::Greater) {
            best = Some((key, i));
        }
    }
    let (_, i) = best.expect("minimal form has a nonzero coordinate");
    let scale = BigRational::new(One::one(), pt.weights[i].into());
    Ok(ExactHeight::log_int(pt.coords[i])?.scale(&scale))
}

/// Naive height of `y^2 = x^3 + A x + B` as a point of `P(4, 6)`.
pub fn elliptic_naive_height(a: i128, b: i128) -> Result<ExactHeight> {
    let disc = a
        .checked_pow(3)
        .and_then(|a3| a3.checked_mul(4))
        .zip(b.checked_mul(b).and_then(|b2| b2.checked_mul(27)))
        .and_then(|(x, y)| x.checked_add(y))
        .ok_or(Error::Overflow("elliptic discriminant"))?;
    if disc == 0 {
        return domain(format!("y^2 = x^3 + {a}x + {b} is singular"));
    }
    height_o1(&minimal_form(&[4, 6], &[a, b])?)
}

/// Height of `y^2 = x^{2g+2} + a_2 x^{2g} + ... + a_{2g+2}` from the
/// coefficients `a_2, ..., a_{2g+1}` as a point of `P(4, 6, ..., 4g + 2)`.
pub fn hyperelliptic_height(coeffs: &[i128]) -> Result<ExactHeight> {
    if coeffs.is_empty() || coeffs.len() % 2 != 0 {
        return domain("need 2g coefficients a_2 .. a_{2g+1}");
    }
    let weights: Vec<u32> = (2..coeffs.len() as u32 + 2).map(|i| 2 * i).collect();
    height_o1(&minimal_form(&weights, coeffs)?)
}

/// All points with `h_{O(1)} <= log bound`, one representative each.
pub fn enumerate_points(weights: &[u32], bound: u64) -> Result<Vec<WeightedPoint>> {
    if bound == 0 {
        return domain("bound must be >= 1");
    }
    let limits: Vec<i128> = weights
        .iter()
        .map(|&a| (bound as i128).checked_pow(a).ok_or(Error::Overflow("enumerate_points")))
        .collect::<Result<_>>()?;
    let total: u128 = limits.iter().map(|&l| 2 * l as u128 + 1).product();
    if total > 50_000_000 {
        return domain("enumeration box too large");
    }
    let mut out = BTreeSet::new();
    let mut cur: Vec<i128> = limits.iter().map(|&l| -l).collect();
    loop {
        if cur.iter().any(|&m| m != 0) {
            let pt = WeightedPoint { weights: weights.to_vec(), coords: cur.clone() };
            if is_minimal(&pt)? {
                out.insert(pt.canonical_sign().coords);
            }
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return Ok(out
                    .into_iter()
                    .map(|coords| WeightedPoint { weights: weights.to_vec(), coords })
                    .collect());
            }
            if cur[i] < limits[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = -limits[i];
            i += 1;
        }
    }
}

fn is_minimal(pt: &WeightedPoint) -> Result<bool> {
    let g = pt.coords.iter().fold(0u128, |g, &m| g.gcd(&m.unsigned_abs()));
    for &(p, _) in arith::factor_u128(g).iter() {
        let all = pt
            .coords
            .iter()
            .zip(&pt.weights)
            .all(|(&m, &a)| m == 0 || arith::ord(m, p).is_ok_and(|o| o >= a));
        if all {
            return Ok(false);
        }
    }
    Ok(true)
}
