//! Degree-two points of `P^1` as rational points of `Sym^2 P^1`.
//!
//! An unordered conjugate pair is recorded by its primitive binary form
//! `a X^2 + b XY + c Y^2`. The stable height is `log M(f)`; the height of
//! `V = Sym^2 O(1)` adds `(1/2) log |disc Q(sqrt(b^2 - 4ac))|` when the pair
//! is irreducible and nothing when it splits over Q.

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::adelic::ExactHeight;
use crate::arith::{self, isqrt};
use crate::error::{domain, Result};

/// A point of `P^1(Q)` as a coprime pair `(x : y)` with a fixed sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    x: i128,
    y: i128,
}

impl ProjPoint {
    pub fn new(x: i128, y: i128) -> Result<Self> {
        let g = x.gcd(&y);
        if g == 0 {
            return domain("(0 : 0) is not a point of P^1");
        }
        let s = if y < 0 || (y == 0 && x < 0) { -g } else { g };
        Ok(ProjPoint { x: x / s, y: y / s })
    }

    pub fn x(&self) -> i128 {
        self.x
    }

    pub fn y(&self) -> i128 {
        self.y
    }

    /// `log max(|x|, |y|)`.
    pub fn height(&self) -> Result<ExactHeight> {
        ExactHeight::log_int(self.x.abs().max(self.y.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadraticPoint {
    /// A conjugate pair of quadratic irrationalities: primitive, `a > 0`,
    /// non-square discriminant.
    Irreducible { a: i128, b: i128, c: i128 },
    /// Two rational points, sorted.
    Split(ProjPoint, ProjPoint),
}

impl QuadraticPoint {
    /// Read a nonzero binary quadratic form; the splitting type follows from
    /// the discriminant.
    pub fn from_form(a: i128, b: i128, c: i128) -> Result<Self> {
        let g = a.gcd(&b).gcd(&c);
        if g == 0 {
            return domain("zero form");
        }
        let s = g * leading_sign(a, b, c);
        let (a, b, c) = (a / s, b / s, c / s);
        let disc = discriminant(a, b, c)?;
        if disc < 0 || !is_square(disc) {
            return Ok(QuadraticPoint::Irreducible { a, b, c });
        }
        let r = isqrt(disc as u128) as i128;
        // the roots of a x^2 + b x y + c y^2 as points (x : y)
        let (p, q) = if a == 0 {
            (ProjPoint::new(1, 0)?, ProjPoint::new(-c, b)?)
        } else {
            (ProjPoint::new(-b + r, 2 * a)?, ProjPoint::new(-b - r, 2 * a)?)
        };
        Self::split(p, q)
    }

    pub fn irreducible(a: i128, b: i128, c: i128) -> Result<Self> {
        match Self::from_form(a, b, c)? {
            q @ QuadraticPoint::Irreducible { .. } => Ok(q),
            QuadraticPoint::Split(..) => domain(format!("{a}x^2 + {b}x + {c} splits over Q")),
        }
    }

    pub fn split(p: ProjPoint, q: ProjPoint) -> Result<Self> {
        Ok(if p <= q { QuadraticPoint::Split(p, q) } else { QuadraticPoint::Split(q, p) })
    }

    /// The primitive form vanishing on the pair, signed so that its first
    /// nonzero coefficient is positive.
    pub fn form(&self) -> (i128, i128, i128) {
        match *self {
            QuadraticPoint::Irreducible { a, b, c } => (a, b, c),
            QuadraticPoint::Split(p, q) => {
                // (y1 X - x1 Y)(y2 X - x2 Y), primitive by Gauss's lemma
                let (a, b, c) = (p.y * q.y, -(p.y * q.x + p.x * q.y), p.x * q.x);
                if leading_sign(a, b, c) < 0 {
                    (-a, -b, -c)
                } else {
                    (a, b, c)
                }
            }
        }
    }
}

fn leading_sign(a: i128, b: i128, c: i128) -> i128 {
    [a, b, c].into_iter().find(|&x| x != 0).map_or(1, i128::signum)
}

fn discriminant(a: i128, b: i128, c: i128) -> Result<i128> {
    b.checked_mul(b)
        .zip(a.checked_mul(c).and_then(|ac| ac.checked_mul(4)))
        .and_then(|(bb, ac4)| bb.checked_sub(ac4))
        .ok_or(crate::error::Error::Overflow("discriminant"))
}

fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n as u128);
        r * r == n as u128
    }
}

/// A height `log_mahler + exact`: the transcendental part in floating point,
/// the discriminant part exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymHeight {
    pub log_mahler: f64,
    pub exact: ExactHeight,
}

impl SymHeight {
    pub fn value(&self) -> f64 {
        self.log_mahler + self.exact.value()
    }
}

/// `log M(f)`; exact `h(Q_1) + h(Q_2)` for split pairs.
pub fn stable_sym_height(q: &QuadraticPoint) -> Result<SymHeight> {
    match q {
        QuadraticPoint::Irreducible { a, b, c } => Ok(SymHeight {
            log_mahler: arith::mahler_measure_quadratic(*a, *b, *c)?.ln(),
            exact: ExactHeight::zero(),
        }),
        QuadraticPoint::Split(p, r) => Ok(SymHeight { log_mahler: 0.0, exact: p.height()? + r.height()? }),
    }
}

/// `(1/2) log |disc Q(sqrt(b^2 - 4ac))|`; zero for split pairs.
pub fn discrepancy(q: &QuadraticPoint) -> Result<ExactHeight> {
    match *q {
        QuadraticPoint::Irreducible { a, b, c } => {
            let (d, _) = arith::power_free_reduce(discriminant(a, b, c)?, 2)?;
            let delta = arith::fundamental_discriminant(d)?;
            Ok(ExactHeight::log_int(delta)?.scale(&BigRational::new(1.into(), 2.into())))
        }
        QuadraticPoint::Split(..) => Ok(ExactHeight::zero()),
    }
}

/// Height of `x` for `V = Sym^2 O(1)`.
pub fn sym_height(q: &QuadraticPoint) -> Result<SymHeight> {
    let mut h = stable_sym_height(q)?;
    h.exact += &discrepancy(q)?;
    Ok(h)
}

/// Absolute multiplicative Weil height `M(f)^{1/2}` of either root.
pub fn abs_height(q: &QuadraticPoint) -> Result<f64> {
    match *q {
        QuadraticPoint::Irreducible { a, b, c } => Ok(arith::mahler_measure_quadratic(a, b, c)?.sqrt()),
        QuadraticPoint::Split(..) => domain("absolute height of a split pair is not a single algebraic point"),
    }
}
