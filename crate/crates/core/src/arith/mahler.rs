use crate::error::{domain, Error, Result};

use super::prime::isqrt;

/// Mahler measure `|a| * max(1, |r1|) * max(1, |r2|)` of `a x^2 + b x + c`.
///
/// Roots come from the closed-form quadratic formula (the cancellation-free
/// variant); a complex pair shares the modulus `sqrt(|c / a|)`.
pub fn mahler_measure_quadratic(a: i128, b: i128, c: i128) -> Result<f64> {
    if a == 0 {
        return domain("leading coefficient must be nonzero");
    }
    let (af, bf, cf) = (a as f64, b as f64, c as f64);
    let disc = b * b - 4 * a * c;
    let lead = af.abs();
    if disc < 0 {
        let modulus = (cf / af).abs().sqrt();
        return Ok(lead * modulus.max(1.0).powi(2));
    }
    let sq = (disc as f64).sqrt();
    let sign = if b >= 0 { 1.0 } else { -1.0 };
    let q = -0.5 * (bf + sign * sq);
    let (r1, r2) = if q == 0.0 {
        // b = 0 and disc = 0, so c = 0: double root at zero
        (0.0, 0.0)
    } else {
        (q / af, cf / q)
    };
    Ok(lead * r1.abs().max(1.0) * r2.abs().max(1.0))
}

/// Exact test of `M(a x^2 + b x + c) < bound`.
///
/// For a quadratic, `M = max(|a|, |c|, (|b| + sqrt(b^2 - 4ac)) / 2)`, the
/// last term present only for real roots, so the comparison reduces to
/// integer inequalities.
pub fn mahler_measure_quadratic_below(a: i128, b: i128, c: i128, bound: u128) -> Result<bool> {
    if a == 0 {
        return domain("leading coefficient must be nonzero");
    }
    if a.unsigned_abs() >= bound || c.unsigned_abs() >= bound {
        return Ok(false);
    }
    let disc = b
        .checked_mul(b)
        .zip(a.checked_mul(c).and_then(|ac| ac.checked_mul(4)))
        .and_then(|(bb, ac4)| bb.checked_sub(ac4))
        .ok_or(Error::Overflow("mahler_measure_quadratic_below"))?;
    if disc < 0 {
        return Ok(true);
    }
    // (|b| + sqrt(disc)) / 2 < bound  <=>  sqrt(disc) < 2 bound - |b|
    let twice = bound.checked_mul(2).ok_or(Error::Overflow("mahler_measure_quadratic_below"))?;
    let b_abs = b.unsigned_abs();
    if b_abs >= twice {
        return Ok(false);
    }
    let gap = twice - b_abs;
    let disc = disc as u128;
    Ok(match gap.checked_mul(gap) {
        Some(g2) => disc < g2,
        None => isqrt(disc) < gap,
    })
}
