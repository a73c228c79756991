//! Cross-validation suites: each compares two independent routes to the
//! same height on randomly drawn inputs.

use std::time::Instant;

use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adelic::ExactHeight;
use crate::arith;
use crate::classifying::{bmu3_vector_height, bmun_height, class_of};
use crate::error::Result;
use crate::football::{
    edd, generic_height, normalize_point, roots_share_prime, tangential_height_with, Root, RootedLine, StackDivisor,
};
use crate::wps::{closed_form_height, height_o1, minimal_form};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub seed: u64,
    /// Random cases per suite.
    pub cases: usize,
    /// Perturb the power-free complement used by the tangential height.
    pub corrupt_phi: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: 0, cases: 2000, corrupt_phi: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub elapsed_ms: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<Tally>) -> SuiteResult {
    let start = Instant::now();
    let tally = f().unwrap_or_else(|e| Tally { cases: 1, failures: 1, first_failure: Some(format!("error: {e}")) });
    SuiteResult {
        name: name.to_string(),
        cases: tally.cases,
        failures: tally.failures,
        first_failure: tally.first_failure,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Every suite, in a fixed order.
pub fn run_all(opts: &CheckOptions) -> Vec<SuiteResult> {
    vec![
        timed("edd = tangential height", || edd_suite(opts)),
        timed("football = weighted projective line", || football_wps_suite(opts)),
        timed("B mu_3 = cubic discriminant", bmu3_suite),
        timed("engine = closed forms", || engine_suite(opts)),
    ]
}

/// A random line with at most 4 roots of order at most 6.
pub fn random_line(rng: &mut impl Rng) -> RootedLine {
    loop {
        let r = rng.gen_range(0..=4);
        let roots = (0..r)
            .map(|_| Root { u: rng.gen_range(-9..=9), v: rng.gen_range(-9..=9), order: rng.gen_range(2..=6) })
            .collect();
        if let Ok(line) = RootedLine::new(roots) {
            return line;
        }
    }
}

/// A coprime point with coordinates up to `bound` in absolute value, off
/// every root, such that no prime divides two root values.
pub fn random_separated_point(rng: &mut impl Rng, line: &RootedLine, bound: i128) -> Result<(i128, i128)> {
    loop {
        let (a, b) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if a.gcd(&b) != 1 {
            continue;
        }
        let on_root = line.roots().iter().any(|r| r.eval(a, b).map_or(true, |v| v == 0));
        if on_root || roots_share_prime(line, (a, b))? {
            continue;
        }
        return normalize_point(a, b);
    }
}

fn edd_suite(opts: &CheckOptions) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let corrupt = opts.corrupt_phi;
    let phi = move |n: i128, m: u32| -> Result<u128> {
        let v = arith::power_free_part(n, m)?;
        Ok(if corrupt && n % 3 == 0 { v + 1 } else { v })
    };
    let mut tally = Tally::new();
    for _ in 0..opts.cases {
        let line = random_line(&mut rng);
        let pt = random_separated_point(&mut rng, &line, 1_000_000)?;
        let lhs = edd(&line, pt)?;
        let rhs = tangential_height_with(&line, pt, phi)?;
        tally.record(lhs == rhs, || format!("{line:?} at {pt:?}: edd {lhs} vs tangential {rhs}"));
    }
    Ok(tally)
}

fn football_wps_suite(opts: &CheckOptions) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut tally = Tally::new();
    let pairs: Vec<(u32, u32)> =
        (2..=6u32).flat_map(|a| (a + 1..=6).map(move |b| (a, b))).filter(|&(a, b)| a.gcd(&b) == 1).collect();
    let per_pair = opts.cases.div_ceil(pairs.len()).max(1);
    for &(a, b) in &pairs {
        let line = RootedLine::football(a, b)?;
        let e = (a as i64).extended_gcd(&(b as i64));
        // O(1) on P(a, b) is n[0] + m[inf] with m a + n b = 1
        let d = StackDivisor::new(0, vec![e.y, e.x]);
        for _ in 0..per_pair {
            let (s, t) = loop {
                let s: i128 = rng.gen_range(-1000..=1000);
                let t: i128 = rng.gen_range(-1000..=1000);
                if s != 0 && t != 0 {
                    break (s, t);
                }
            };
            let pt = minimal_form(&[a, b], &[s, t])?;
            let (s, t) = (pt.coords()[0], pt.coords()[1]);
            let lhs = generic_height(&line, &d, (t.pow(a), s.pow(b)))?.total;
            let rhs = height_o1(&pt)?;
            tally.record(lhs == rhs, || format!("F({a},{b}) at (s, t) = ({s}, {t}): {lhs} vs {rhs}"));
        }
    }
    Ok(tally)
}

/// Discriminant of `Q(m^{1/3})` for cubefree `m > 1`: `-27 rad(m)^2`, or
/// `-3 rad(m)^2` when `m = +-1 mod 9`.
pub fn pure_cubic_discriminant(m: i128) -> Result<i128> {
    let radical: i128 = arith::factor(m)?.factors().iter().map(|&(p, _)| p as i128).product();
    let r = m.rem_euclid(9);
    let k = if r == 1 || r == 8 { 3 } else { 27 };
    Ok(-k * radical * radical)
}

fn bmu3_suite() -> Result<Tally> {
    let mut tally = Tally::new();
    let half = BigRational::new(1.into(), 2.into());
    for m in 2..500i128 {
        if m % 3 == 0 || !arith::is_power_free(m, 3)? {
            continue;
        }
        let h = bmu3_vector_height(&class_of(m, 1, 3)?)?;
        let disc = arith::factor(pure_cubic_discriminant(m)?)?;
        let expected = ExactHeight::log_abs(&disc).scale(&half);
        let ok = disc.factors().iter().map(|f| f.0).chain(h.terms().keys().copied()).all(|p| {
            p == 3 || h.coefficient(p) == expected.coefficient(p)
        });
        tally.record(ok, || format!("m = {m}: {h} vs (1/2) log |{}|", pure_cubic_discriminant(m).unwrap_or(0)));
    }
    Ok(tally)
}

/// A random point in minimal form on a weighted projective stack.
pub fn random_weighted_point(rng: &mut impl Rng) -> Result<crate::wps::WeightedPoint> {
    let k = rng.gen_range(1..=4);
    let weights: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
    loop {
        let coords: Vec<i128> = (0..k)
            .map(|_| {
                let scale = 10i128.pow(rng.gen_range(0..=5));
                rng.gen_range(-scale..=scale)
            })
            .collect();
        if coords.iter().any(|&c| c != 0) {
            return minimal_form(&weights, &coords);
        }
    }
}

fn engine_suite(opts: &CheckOptions) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xe791);
    let mut tally = Tally::new();
    for _ in 0..opts.cases {
        let pt = random_weighted_point(&mut rng)?;
        let lhs = height_o1(&pt)?;
        let rhs = closed_form_height(&pt)?;
        tally.record(lhs == rhs, || format!("{pt:?}: engine {lhs} vs closed form {rhs}"));

        let n = rng.gen_range(2..=6u32);
        let x: i128 = rng.gen_range(1..=1_000_000_000);
        let c = class_of(x, 1, n)?;
        let lhs = bmun_height(&c, 1)?;
        let rhs = ExactHeight::log_int(c.rep())?.scale(&BigRational::new(1.into(), n.into()));
        tally.record(lhs == rhs, || format!("class {c}: engine {lhs} vs (1/n) log |rep| {rhs}"));
    }
    Ok(tally)
}
