//! Searches for exceptions to the stacky Vojta inequality on two rooted
//! lines: the `(4,4,4)`-rooted line at `0, -1, inf` and the
//! `(2,2,2,2,2)`-rooted line at `0, 1, 2, 3, 4`.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sieve::sieve_power_free_parts;
use crate::error::{domain, Result};

fn check_args(cutoff: u64, delta: f64) -> Result<()> {
    if cutoff == 0 {
        return domain("cutoff must be >= 1");
    }
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    Ok(())
}

/// `value < x^{1 - delta}`, evaluated in `f64`.
#[inline]
fn below_power(value: u128, x: u64, delta: f64) -> bool {
    (value as f64) < (x as f64).powf(1.0 - delta)
}

/// Coprime `1 <= a <= b <= cutoff` with
/// `Phi_4(a) Phi_4(b) Phi_4(a + b) < b^{1 - delta}`, sorted.
pub fn vojta_search_444(cutoff: u64, delta: f64) -> Result<Vec<(u64, u64)>> {
    check_args(cutoff, delta)?;
    let phi = sieve_power_free_parts(2 * cutoff, 4)?;
    let phi4 = |n: u64| phi[n as usize - 1] as u128;
    // each factor is >= 1, so both Phi_4(a) and Phi_4(b) are below the cap
    let cap = (cutoff as f64).powf(1.0 - delta);
    let mut small: Vec<u64> = (1..=cutoff).filter(|&n| (phi4(n) as f64) < cap).collect();
    small.sort_by_key(|&n| (phi4(n), n));
    let mut hits: Vec<(u64, u64)> = small
        .par_iter()
        .flat_map_iter(|&b| {
            let pb = phi4(b);
            let mut out = Vec::new();
            for &a in &small {
                let pa = phi4(a);
                if !below_power(pa * pb, b, delta) {
                    break;
                }
                if a <= b && a.gcd(&b) == 1 && below_power(pa * pb * phi4(a + b), b, delta) {
                    out.push((a, b));
                }
            }
            out
        })
        .collect();
    hits.sort_unstable();
    Ok(hits)
}

/// The progression `first, first + step, ..., first + 4 step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub first: u64,
    pub step: u64,
}

impl Progression {
    pub fn terms(&self) -> [u64; 5] {
        std::array::from_fn(|i| self.first + i as u64 * self.step)
    }

    pub fn last(&self) -> u64 {
        self.first + 4 * self.step
    }
}

/// `sqf(x y)` from `sqf(x)` and `sqf(y)`.
#[inline]
fn sqf_product(x: u128, y: u128) -> u128 {
    let g = x.gcd(&y);
    (x / g) * (y / g)
}

/// Five-term progressions with `gcd(first, step) = 1`, last term at most
/// `cutoff`, and `sqf(a_1 a_2 a_3 a_4 a_5) < a_5^{1 - delta}`, sorted.
///
/// A prime `p >= 5` dividing two terms would divide `step` and hence
/// `first`, so the part of `sqf` prime to 6 is the product over the terms of
/// `r(n) = sqf(n) / gcd(sqf(n), 6)`; every term must have small `r`.
pub fn vojta_search_ap5(cutoff: u64, delta: f64) -> Result<Vec<Progression>> {
    check_args(cutoff, delta)?;
    if cutoff < 5 {
        return Ok(Vec::new());
    }
    let sqf = sieve_power_free_parts(cutoff, 2)?;
    let sqf_of = |n: u64| sqf[n as usize - 1] as u128;
    let rough = |n: u64| {
        let s = sqf_of(n);
        s / s.gcd(&6)
    };
    let cap = (cutoff as f64).powf(1.0 - delta);
    // candidates for the first and last terms, by residue mod 4 and then r
    let mut classes: [Vec<u64>; 4] = Default::default();
    for n in 1..=cutoff {
        if (rough(n) as f64) < cap {
            classes[(n % 4) as usize].push(n);
        }
    }
    for c in &mut classes {
        c.sort_by_key(|&n| (rough(n), n));
    }
    let lasts: Vec<u64> = classes.iter().flatten().copied().filter(|&n| n >= 5).collect();
    let mut hits: Vec<Progression> = lasts
        .par_iter()
        .flat_map_iter(|&last| {
            let r_last = rough(last);
            let mut out = Vec::new();
            for &first in &classes[(last % 4) as usize] {
                let r_first = rough(first);
                if !below_power(r_first * r_last, last, delta) {
                    break;
                }
                if first >= last {
                    continue;
                }
                let step = (last - first) / 4;
                if first.gcd(&step) != 1 {
                    continue;
                }
                let p = Progression { first, step };
                let terms = p.terms();
                let r: u128 = terms.iter().map(|&t| rough(t)).product();
                if !below_power(r, last, delta) {
                    continue;
                }
                let s = terms.iter().fold(1u128, |acc, &t| sqf_product(acc, sqf_of(t)));
                if below_power(s, last, delta) {
                    out.push(p);
                }
            }
            out
        })
        .collect();
    hits.sort_unstable();
    Ok(hits)
}
