//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Growth exponents are fitted with `FitModel::LogPower` over samples with
//! `B >= e^2`, or `FitModel::PowerLaw` where too few samples remain.
//!
//! Criteria listed in `EXPECTED_FAILURES` are run in full and reported as
//! FAIL when they fail; they only affect the exit status when
//! `ACCEPTANCE_STRICT` is set. Any other failure exits nonzero.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stacky_heights::classifying::{bmu3_vector_height, class_of, malle_exponent, PermGroup};
use stacky_heights::counting::{
    count_bmun, count_football222, count_quadratic_fields, count_quadratic_points, count_rooted3_at_0,
    fit_samples, geometric_schedule, sieve_power_free_parts, vojta_search_444, vojta_search_ap5, FitModel, Progression,
};
use stacky_heights::football::{edd, generic_height, tangential_height, Root, RootedLine, StackDivisor};
use stacky_heights::wps::{height_o1, minimal_form};
use stacky_heights::{height_from_sections, ExactHeight, FactoredRational};

const EXPECTED_FAILURES: &[u32] = &[8, 9];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

// ---------------------------------------------------------------- oracles

/// Prime factorization by trial division.
fn factor(mut n: u128) -> BTreeMap<u128, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2u128;
    while p * p <= n {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// The `m`-power-free positive integer `f` with `f |n|` an `m`-th power.
fn phi(n: u128, m: u32) -> u128 {
    factor(n)
        .into_iter()
        .map(|(p, e)| p.pow((m - e % m) % m))
        .product()
}

fn sqf(n: u128) -> u128 {
    phi(n, 2)
}

fn is_power_free(n: u128, m: u32) -> bool {
    factor(n).values().all(|&e| e < m)
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `(num/den) log |n|`, from trial division.
fn scaled_log(n: u128, num: i64, den: i64) -> ExactHeight {
    ExactHeight::from_terms(factor(n).into_iter().map(|(p, e)| (p, num * e as i64, den)))
}

fn fundamental_disc(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Discriminant of `Q(m^{1/3})` for cubefree `m >= 2`.
fn pure_cubic_disc(m: u128) -> i128 {
    let rad: u128 = factor(m).keys().product();
    let k = if m % 9 == 1 || m % 9 == 8 { 3 } else { 27 };
    -(k * (rad * rad) as i128)
}

// ------------------------------------------------------------ criteria

fn random_line(rng: &mut ChaCha8Rng) -> RootedLine {
    loop {
        let r = rng.gen_range(0..=4);
        let roots: Vec<Root> = (0..r)
            .map(|_| Root { u: rng.gen_range(-9..=9), v: rng.gen_range(-9..=9), order: rng.gen_range(2..=6) })
            .collect();
        if let Ok(line) = RootedLine::new(roots) {
            return line;
        }
    }
}

fn c1_edd_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut cases, mut bad) = (0, Vec::new());
    while cases < 10_000 {
        let line = random_line(&mut rng);
        let (a, b): (i128, i128) = (rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(-1_000_000..=1_000_000));
        if a.gcd(&b) != 1 {
            continue;
        }
        let values: Vec<i128> = line.roots().iter().map(|r| r.u * a + r.v * b).collect();
        if values.contains(&0) {
            continue;
        }
        let shared = (0..values.len())
            .any(|i| (i + 1..values.len()).any(|j| values[i].gcd(&values[j]) > 1));
        if shared {
            continue;
        }
        cases += 1;
        let (lhs, rhs) = (edd(&line, (a, b)), tangential_height(&line, (a, b)));
        if lhs.is_err() || lhs != rhs {
            bad.push(format!("{line:?} at ({a}, {b})"));
        }
    }
    outcome(bad.is_empty(), format!("{cases} lines, {} mismatches {:?}", bad.len(), bad.first()))
}

fn c2_football_wps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut cases, mut bad) = (0, 0);
    for a in 2..=6u32 {
        for b in a + 1..=6 {
            if a.gcd(&b) != 1 {
                continue;
            }
            let line = RootedLine::football(a, b).unwrap();
            let e = (a as i64).extended_gcd(&(b as i64));
            let d = StackDivisor::new(0, vec![e.y, e.x]);
            for _ in 0..1000 {
                let (s, t) = loop {
                    let s: i128 = rng.gen_range(-1000..=1000);
                    let t: i128 = rng.gen_range(-1000..=1000);
                    if s != 0 && t != 0 {
                        break (s, t);
                    }
                };
                let pt = minimal_form(&[a, b], &[s, t]).unwrap();
                let (s, t) = (pt.coords()[0], pt.coords()[1]);
                let lhs = generic_height(&line, &d, (t.pow(a), s.pow(b))).map(|h| h.total);
                cases += 1;
                if lhs != height_o1(&pt) {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{cases} points, {bad} mismatches"))
}

fn weighted_minimal(weights: &[u32], coords: &[i128]) -> bool {
    let g = coords.iter().fold(0i128, |g, &c| g.gcd(&c));
    factor(g as u128).keys().all(|&p| {
        weights.iter().zip(coords).any(|(&w, &c)| c % (p as i128).pow(w) != 0)
    })
}

/// `log max_i |M_i|^{1/a_i}` with the maximum located in exact arithmetic.
fn closed_form(weights: &[u32], coords: &[i128]) -> ExactHeight {
    let lcm = weights.iter().fold(1u32, |l, &w| l.lcm(&w));
    let i = (0..weights.len())
        .filter(|&i| coords[i] != 0)
        .max_by_key(|&i| BigInt::from(coords[i].abs()).pow(lcm / weights[i]))
        .unwrap();
    scaled_log(coords[i].unsigned_abs(), 1, weights[i] as i64)
}

fn c3_engine_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut cases, mut bad) = (0, 0);
    while cases < 10_000 {
        let k = rng.gen_range(1..=4);
        let weights: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
        let coords: Vec<i128> = (0..k)
            .map(|_| {
                let s = 10i128.pow(rng.gen_range(0..=5));
                rng.gen_range(-s..=s)
            })
            .collect();
        if coords.iter().all(|&c| c == 0) || !weighted_minimal(&weights, &coords) {
            continue;
        }
        cases += 1;
        let lcm = weights.iter().fold(1u32, |l, &w| l.lcm(&w));
        let sections: Vec<FactoredRational> = weights
            .iter()
            .zip(&coords)
            .filter(|(_, &c)| c != 0)
            .map(|(&w, &c)| FactoredRational::integer(c).unwrap().pow(lcm / w))
            .collect();
        if height_from_sections(lcm, &sections).ok() != Some(closed_form(&weights, &coords)) {
            bad += 1;
        }

        let n = rng.gen_range(2..=6u32);
        let x: u128 = rng.gen_range(1..=1_000_000_000);
        if is_power_free(x, n) {
            let sign = if n % 2 == 0 && rng.gen_bool(0.5) { -1 } else { 1 };
            let section = FactoredRational::integer(sign * x as i128).unwrap();
            if height_from_sections(n, &[section]).ok() != Some(scaled_log(x, 1, n as i64)) {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{cases} weighted points plus power classes, {bad} mismatches"))
}

fn c4_bmu3_discriminant() -> Outcome {
    let (mut cases, mut bad) = (0, Vec::new());
    for m in 2..500u128 {
        if m % 3 == 0 || !is_power_free(m, 3) {
            continue;
        }
        cases += 1;
        let h = bmu3_vector_height(&class_of(m as i128, 1, 3).unwrap()).unwrap();
        let disc = factor(pure_cubic_disc(m).unsigned_abs());
        let primes: HashSet<u128> = disc.keys().chain(h.terms().keys()).copied().collect();
        for p in primes.into_iter().filter(|&p| p != 3) {
            let expected = q(*disc.get(&p).unwrap_or(&0) as i64, 2);
            if h.coefficient(p) != expected {
                bad.push((m, p));
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} cubefree m, mismatches {bad:?}"))
}

fn c5_malle() -> Outcome {
    let one = Ratio::new(1u64, 1);
    let mut checks: Vec<(String, PermGroup, Ratio<u64>)> = vec![
        ("S2".into(), PermGroup::symmetric(2).unwrap(), one),
        ("S3".into(), PermGroup::symmetric(3).unwrap(), one),
        ("S4".into(), PermGroup::symmetric(4).unwrap(), one),
        ("Z/3 < S3".into(), PermGroup::cyclic(3).unwrap(), Ratio::new(1, 2)),
        ("A3".into(), PermGroup::alternating(3).unwrap(), Ratio::new(1, 2)),
    ];
    for n in [2u32, 3, 5, 7, 11, 13] {
        checks.push((format!("Z/{n} < S{n}"), PermGroup::cyclic(n).unwrap(), Ratio::new(1, n as u64 - 1)));
    }
    let bad: Vec<String> = checks
        .iter()
        .filter(|(_, g, want)| malle_exponent(g).ok() != Some(*want))
        .map(|(name, g, want)| format!("{name}: {:?} != {want}", malle_exponent(g)))
        .collect();
    outcome(bad.is_empty(), format!("{} groups, mismatches {bad:?}", checks.len()))
}

fn decade_schedule(lo: f64, hi: f64) -> Vec<f64> {
    let steps = (10.0 * (hi / lo).log10()).round() as usize + 1;
    geometric_schedule(lo, 10f64.powf(0.1), steps).unwrap()
}

fn samples(bounds: &[f64], count: impl Fn(f64) -> u64) -> Vec<(f64, f64)> {
    bounds.iter().map(|&b| (b, count(b) as f64)).collect()
}

fn c6_quadratic_fields() -> Outcome {
    let xs = decade_schedule(1e4, 1e7);
    let s = samples(&xs, |x| count_quadratic_fields(x.round() as u64).unwrap());
    let fit = fit_samples(&s, FitModel::LogPower).unwrap();
    let density = s.last().unwrap().1 / 1e7;
    let ok = (fit.a - 1.0).abs() <= 0.02 && (0.59..=0.63).contains(&density);
    outcome(ok, format!("a = {:.4}, b = {:.3}, N(1e7)/1e7 = {density:.4}", fit.a, fit.b))
}

fn c7_bmun() -> Outcome {
    let bs = decade_schedule(10.0, 1e3);
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [2u32, 3] {
        let fit = fit_samples(&samples(&bs, |b| count_bmun(n, b).unwrap()), FitModel::LogPower).unwrap();
        ok &= (fit.a - n as f64).abs() <= 0.05;
        detail.push(format!("n = {n}: a = {:.4}", fit.a));
    }
    outcome(ok, detail.join(", "))
}

fn c8_rooted3() -> Outcome {
    let bs = decade_schedule(10.0, 1e3);
    let s = samples(&bs, |b| count_rooted3_at_0(b).unwrap());
    let fit = fit_samples(&s, FitModel::LogPower).unwrap();
    let top = fit_samples(&s, FitModel::LogPowerTopDecade).unwrap();
    let ok = (fit.a - 1.0).abs() <= 0.1 && (1.2..=2.8).contains(&fit.b);
    outcome(
        ok,
        format!(
            "a = {:.4}, b = {:.4} over B in [10, 1e3]; top-decade diagnostic a = {:.4}, b = {:.4}",
            fit.a, fit.b, top.a, top.b
        ),
    )
}

fn c9_football() -> Outcome {
    let bs = decade_schedule(10.0, 1e4);
    let s = samples(&bs, |b| count_football222(b).unwrap());
    let fit = fit_samples(&s, FitModel::LogPower).unwrap();
    let top = fit_samples(&s, FitModel::LogPowerTopDecade).unwrap();
    let lower = s.iter().all(|&(b, n)| n >= 0.5 * 6.0 / (PI * PI) * b);
    let ok = (fit.a - 1.0).abs() <= 0.1 && lower;
    outcome(
        ok,
        format!(
            "a = {:.4}, b = {:.4}, lower bound holds: {lower}; top-decade diagnostic a = {:.4}, b = {:.4}",
            fit.a, fit.b, top.a, top.b
        ),
    )
}

fn c10_quadratic_points() -> Outcome {
    let bs = [2.0, 3.0, 4.0, 6.0, 8.0, 11.0];
    let s = samples(&bs, |b| count_quadratic_points(b).unwrap());
    let fit = fit_samples(&s, FitModel::PowerLaw).unwrap();
    let counts: Vec<u64> = s.iter().map(|x| x.1 as u64).collect();
    outcome(
        (fit.a - 6.0).abs() <= 0.3,
        format!("a = {:.4} from {} samples with B >= e^2, counts {counts:?}", fit.a, fit.samples_used),
    )
}

fn brute_444(cutoff: u64, delta: f64) -> Vec<(u64, u64)> {
    let phi4: Vec<u128> = (0..=2 * cutoff).map(|n| if n == 0 { 0 } else { phi(n as u128, 4) }).collect();
    let mut out = Vec::new();
    for b in 1..=cutoff {
        for a in 1..=b {
            let v = phi4[a as usize] * phi4[b as usize] * phi4[(a + b) as usize];
            if a.gcd(&b) == 1 && (v as f64) < (b as f64).powf(1.0 - delta) {
                out.push((a, b));
            }
        }
    }
    out
}

fn brute_ap5(cutoff: u64, delta: f64) -> Vec<Progression> {
    let mut out = Vec::new();
    for first in 1..cutoff {
        for step in 1..=(cutoff - first) / 4 {
            if first.gcd(&step) != 1 {
                continue;
            }
            let prod: u128 = (0..5).map(|i| (first + i * step) as u128).product();
            let last = first + 4 * step;
            if (sqf(prod) as f64) < (last as f64).powf(1.0 - delta) {
                out.push(Progression { first, step });
            }
        }
    }
    out
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn c11_vojta() -> Outcome {
    let delta = 0.3;
    let h1 = in_pool(1, || vojta_search_444(100_000, delta).unwrap());
    let h4 = in_pool(4, || vojta_search_444(100_000, delta).unwrap());
    let a1 = in_pool(1, || vojta_search_ap5(100_000, delta).unwrap());
    let a4 = in_pool(4, || vojta_search_ap5(100_000, delta).unwrap());
    let deterministic = h1 == h4 && a1 == a4;
    let oracle_444 = vojta_search_444(1000, delta).unwrap() == brute_444(1000, delta);
    let oracle_ap5 = vojta_search_ap5(1000, delta).unwrap() == brute_ap5(1000, delta);
    outcome(
        deterministic && oracle_444 && oracle_ap5,
        format!(
            "cutoff 1e5: {} (4,4,4) hits, {} progressions; thread-independent: {deterministic}; \
             oracle at 1e3: {oracle_444}/{oracle_ap5}",
            h1.len(),
            a1.len()
        ),
    )
}

/// Mahler measure of an irreducible primitive quadratic strictly below `k`,
/// from its roots.
fn mahler_below(a: i128, b: i128, c: i128, k: i128) -> bool {
    let d = b * b - 4 * a * c;
    if d < 0 {
        // conjugate roots with |r|^2 = c / a
        return a.max(c.abs()) < k;
    }
    let (af, bf, df) = (a as f64, b as f64, (d as f64).sqrt());
    let roots = [(-bf + df) / (2.0 * af), (-bf - df) / (2.0 * af)];
    let m = af * roots.iter().map(|r| r.abs().max(1.0)).product::<f64>();
    if (m - k as f64).abs() > 1e-6 * k as f64 {
        return m < k as f64;
    }
    // near the boundary: M is a, |c|, or (|b| + sqrt d) / 2
    let outside = roots.iter().filter(|r| r.abs() > 1.0).count();
    match outside {
        0 => a < k,
        2 => c.abs() < k,
        _ => 2 * k - b.abs() > 0 && d < (2 * k - b.abs()).pow(2),
    }
}

fn brute_quadratic_points(k: i128) -> u64 {
    let mut n = 0;
    for a in 1..=k {
        for b in -2 * k..=2 * k {
            for c in -k..=k {
                let d = b * b - 4 * a * c;
                let square = d >= 0 && ((d as f64).sqrt().round() as i128).pow(2) == d;
                if c == 0 || square || a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                if mahler_below(a, b, c, k) {
                    n += 1;
                }
            }
        }
    }
    2 * n
}

fn c12_brute_force() -> Outcome {
    let mut bad = Vec::new();

    for (n, bounds) in [(2u32, vec![1.0, 2.0, 2.5, 10.0, 31.0]), (3, vec![1.0, 2.0, 3.3, 10.0]), (4, vec![2.0, 5.0])] {
        for b in bounds {
            let y = (b as f64).powi(n as i32).floor() as u128;
            let positive = (1..=y).filter(|&k| is_power_free(k, n)).count() as u64;
            let want = if n % 2 == 0 { 2 * positive } else { positive };
            if count_bmun(n, b).unwrap() != want {
                bad.push(format!("bmun n={n} B={b}"));
            }
        }
    }

    for x in [2u64, 3, 4, 8, 100, 1000, 5000] {
        let want = (-(x as i64)..=x as i64)
            .filter(|&d| d != 0 && d != 1 && is_power_free(d.unsigned_abs() as u128, 2))
            .filter(|&d| fundamental_disc(d).unsigned_abs() <= x)
            .count() as u64;
        if count_quadratic_fields(x).unwrap() != want {
            bad.push(format!("quadratic fields X={x}"));
        }
    }

    let sq: Vec<u128> = (0..=4000u128).map(|n| if n == 0 { 0 } else { sqf(n) }).collect();
    for b in [1.0, 2f64.sqrt(), 2.0, 3.7, 10.0, 20.0, 31.0, 44.5] {
        let k = (b * b - 1e-9).ceil() as u64;
        let mut want = 0u64;
        for x in 1..k {
            for y in 1..k {
                let v = sq[x as usize] * sq[y as usize] * sq[(x + y) as usize] * x.max(y) as u128;
                if x.gcd(&y) == 1 && (v as f64) < b * b - 1e-9 * b * b {
                    want += 1;
                }
            }
        }
        if count_football222(b).unwrap() != want {
            bad.push(format!("football222 B={b}"));
        }
    }

    for b3 in [1u128, 2, 10, 1000, 100_000, 1_000_000_000] {
        let b = (b3 as f64).cbrt();
        let mut want = 0u64;
        for x in 1u128..200 {
            for y in 1u128..200 {
                if x.gcd(&y) == 1 && phi(x, 3) * x.max(y).pow(4) < b3 {
                    want += 1;
                }
            }
        }
        if count_rooted3_at_0(b).unwrap() != want {
            bad.push(format!("rooted3 B^3={b3}"));
        }
    }

    for k in [1i128, 2, 3, 5, 9, 16, 25, 36] {
        let b = (k as f64).sqrt();
        if count_quadratic_points(b).unwrap() != brute_quadratic_points(k) {
            bad.push(format!("quadratic points B^2={k}"));
        }
    }

    for (m, limit) in [(2u32, 100_000u64), (3, 100_000), (4, 100_000), (5, 10_000), (6, 1000)] {
        let sieved = sieve_power_free_parts(limit, m).unwrap();
        if sieved.iter().enumerate().any(|(i, &v)| v as u128 != phi(i as u128 + 1, m)) {
            bad.push(format!("sieve m={m}"));
        }
    }

    outcome(bad.is_empty(), format!("mismatches {bad:?}"))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 12] = [
        (1, "edd equals tangential height", Duration::from_secs(30), c1_edd_identity),
        (2, "football equals weighted projective line", Duration::from_secs(10), c2_football_wps),
        (3, "engine equals closed forms", Duration::MAX, c3_engine_closed_forms),
        (4, "B mu_3 height equals half log discriminant", Duration::MAX, c4_bmu3_discriminant),
        (5, "Malle exponents", Duration::MAX, c5_malle),
        (6, "quadratic field count growth", Duration::from_secs(60), c6_quadratic_fields),
        (7, "B mu_n count growth", Duration::from_secs(120), c7_bmun),
        (8, "single order-3 root count growth", Duration::from_secs(300), c8_rooted3),
        (9, "(2,2,2) football count growth", Duration::from_secs(600), c9_football),
        (10, "quadratic points growth", Duration::from_secs(300), c10_quadratic_points),
        (11, "Vojta searches", Duration::MAX, c11_vojta),
        (12, "brute-force oracle equivalence", Duration::MAX, c12_brute_force),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    let (mut failed, mut blocking) = (Vec::new(), Vec::new());
    for (id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed < limit;
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status}: {name} ({:.2} s) {}", elapsed.as_secs_f64(), out.detail);
        if !ok {
            failed.push(id);
            if strict || !EXPECTED_FAILURES.contains(&id) {
                blocking.push(id);
            }
        }
    }
    println!("failed: {failed:?}; expected failures: {EXPECTED_FAILURES:?}");
    if !blocking.is_empty() {
        eprintln!("unexpected failures: {blocking:?}");
        std::process::exit(1);
    }
}
