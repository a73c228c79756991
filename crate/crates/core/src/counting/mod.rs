//! Counting functions `N(B) = #{x : H(x) <= B}` for several families,
//! exponent fits, and stacky-Vojta searches.
//!
//! Region conventions are fixed: football counts use coprime `a, b >= 1`;
//! quadratic points use a strict bound; `B mu_n` counts use `h <= log B`.
//! All kernels parallelize over disjoint ranges and reduce in a fixed order,
//! so results do not depend on the thread count.

mod families;
mod fit;
pub mod sieve;
mod vojta;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use families::{
    count_bmun, count_football222, count_quadratic_fields, count_quadratic_points, count_rooted3_at_0,
};
pub use fit::{fit_exponents, fit_samples, Fit, FitModel};
pub use sieve::sieve_power_free_parts;
pub use vojta::{vojta_search_444, vojta_search_ap5, Progression};

use crate::error::{domain, Error, Result};

/// Round `x` to the nearest integer when within `1e-9` relative of it, so
/// that `sqrt(2)^2` is treated as 2.
pub fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Largest integer `v` with `v <= x`.
pub fn floor_bound(x: f64) -> u128 {
    snap(x).floor().max(0.0) as u128
}

/// Smallest integer `q` such that `v < x` exactly when `v < q`.
pub fn strict_bound(x: f64) -> u128 {
    snap(x).ceil().max(0.0) as u128
}

/// A counting family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Classes of `B mu_n(Q)` with `h_L <= log B`.
    Bmun { n: u32 },
    /// Quadratic fields with `|disc| <= B`.
    QuadraticFields,
    /// `(2,2,2)`-rooted line, tangential height below `B`.
    Football222,
    /// Line with one order-3 root at 0, tangential height below `B`.
    Rooted3At0,
    /// Degree-two points of `P^1` with absolute height below `B`.
    QuadraticPoints,
}

impl Family {
    pub fn count(&self, bound: f64) -> Result<u64> {
        match *self {
            Family::Bmun { n } => count_bmun(n, bound),
            Family::QuadraticFields => {
                if !(bound >= 0.0) {
                    return domain("bound must be nonnegative");
                }
                count_quadratic_fields(u64::try_from(floor_bound(bound)).map_err(|_| Error::Overflow("bound"))?)
            }
            Family::Football222 => count_football222(bound),
            Family::Rooted3At0 => count_rooted3_at_0(bound),
            Family::QuadraticPoints => count_quadratic_points(bound),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bmun { .. } => "bmun",
            Family::QuadraticFields => "quadratic-fields",
            Family::Football222 => "football222",
            Family::Rooted3At0 => "rooted3",
            Family::QuadraticPoints => "quadratic-points",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Bmun { n } => write!(f, "bmun:{n}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts the names printed by `Display`, e.g. `bmun:3`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let family = match (name, param) {
            ("bmun", Some(n)) => Family::Bmun {
                n: n.parse().map_err(|_| Error::Domain(format!("bad n in {s:?}")))?,
            },
            ("quadratic-fields", None) => Family::QuadraticFields,
            ("football222", None) => Family::Football222,
            ("rooted3", None) => Family::Rooted3At0,
            ("quadratic-points", None) => Family::QuadraticPoints,
            _ => return domain(format!("unknown family {s:?}")),
        };
        Ok(family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub bound: f64,
    pub count: u64,
}

/// The samples of a counting run and an optional fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub family: Family,
    pub samples: Vec<Sample>,
    pub fit: Option<Fit>,
}

impl CountReport {
    pub fn new(family: Family) -> Self {
        CountReport { family, samples: Vec::new(), fit: None }
    }

    /// Append a sample; bounds must increase strictly and counts may not
    /// decrease.
    pub fn push(&mut self, bound: f64, count: u64) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(bound > last.bound) {
                return domain(format!("bounds must increase: {} after {}", bound, last.bound));
            }
            if count < last.count {
                return domain(format!("counts must not decrease: {count} after {}", last.count));
            }
        }
        self.samples.push(Sample { bound, count });
        Ok(())
    }

    /// Count at every bound of `schedule`.
    pub fn run(family: Family, schedule: &[f64]) -> Result<Self> {
        let mut report = CountReport::new(family);
        for &b in schedule {
            report.push(b, family.count(b)?)?;
        }
        Ok(report)
    }

    pub fn with_fit(mut self, model: FitModel) -> Result<Self> {
        self.fit = Some(fit_exponents(&self, model)?);
        Ok(self)
    }
}

/// `b0, b0 r, ..., b0 r^{steps - 1}`.
pub fn geometric_schedule(b0: f64, ratio: f64, steps: usize) -> Result<Vec<f64>> {
    if !(b0 > 0.0) || !(ratio > 1.0) {
        return domain("schedule needs b0 > 0 and ratio > 1");
    }
    Ok((0..steps).map(|i| snap(b0 * ratio.powi(i as i32))).collect())
}
