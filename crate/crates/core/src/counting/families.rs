//! Counting functions `N(B)` for the individual families.

use num_integer::Integer;
use rayon::prelude::*;

use super::sieve::{mobius_up_to, squarefree_flags};
use super::{floor_bound, strict_bound};
use crate::arith::{self, iroot, isqrt};
use crate::error::{domain, Error, Result};

/// Classes of `Q^* / (Q^*)^n` with `h_L <= log B`: `n`-power-free integers
/// with `|rep| <= B^n`, counted with both signs when `n` is even.
pub fn count_bmun(n: u32, bound: f64) -> Result<u64> {
    if n < 2 {
        return domain(format!("B mu_n needs n >= 2, got {n}"));
    }
    if !(bound >= 1.0) {
        return domain("bound must be >= 1");
    }
    let y = floor_bound(bound.powi(n as i32));
    let positive = power_free_count(y, n)?;
    Ok(if n % 2 == 0 { 2 * positive } else { positive })
}

/// `#{1 <= k <= y : k is n-power-free} = sum_d mu(d) floor(y / d^n)`.
fn power_free_count(y: u128, n: u32) -> Result<u64> {
    let dmax = iroot(y, n) as u64;
    let mu = mobius_up_to(dmax);
    let mut total: i128 = 0;
    for d in 1..=dmax {
        if mu[d as usize] != 0 {
            total += mu[d as usize] as i128 * (y / (d as u128).pow(n)) as i128;
        }
    }
    u64::try_from(total).map_err(|_| Error::Overflow("count_bmun"))
}

/// Squarefree `d != 0, 1` with `|disc Q(sqrt d)| <= x`.
pub fn count_quadratic_fields(x: u64) -> Result<u64> {
    let flags = squarefree_flags(x);
    let mut count = 0u64;
    for k in 1..=x {
        if !flags[k as usize] {
            continue;
        }
        for d in [k as i64, -(k as i64)] {
            if d == 1 {
                continue;
            }
            let disc = if d.rem_euclid(4) == 1 { k } else { 4 * k };
            if disc <= x {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Coprime `a, b >= 1` with `Phi_3(a) max(a, b)^4 < B^3`.
pub fn count_rooted3_at_0(bound: f64) -> Result<u64> {
    if !(bound >= 1.0) {
        return domain("bound must be >= 1");
    }
    let q = strict_bound(bound.powi(3));
    if q <= 1 {
        return Ok(0);
    }
    let limit = q - 1;
    let mut count = 0u64;
    for a in 1u128.. {
        if a.pow(4) > limit {
            break;
        }
        let f = arith::factor(a as i128)?;
        let phi3 = arith::power_free_part_of(&f, 3)?;
        let primes: Vec<u128> = f.factors().iter().map(|&(p, _)| p).collect();
        // b <= a: the bound is phi3 a^4
        if phi3.checked_mul(a.pow(4)).is_some_and(|v| v <= limit) {
            count += coprime_up_to(&primes, a);
        }
        // b > a: phi3 b^4 < B^3
        let bmax = iroot(limit / phi3, 4);
        if bmax > a {
            count += coprime_up_to(&primes, bmax) - coprime_up_to(&primes, a);
        }
    }
    Ok(count)
}

/// `#{1 <= b <= x : gcd(b, n) = 1}` for `n` with the given distinct primes.
fn coprime_up_to(primes: &[u128], x: u128) -> u64 {
    let mut total: i128 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let mut d = 1u128;
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d = d.saturating_mul(p);
            }
        }
        let term = (x / d) as i128;
        total += if mask.count_ones() % 2 == 0 { term } else { -term };
    }
    total as u64
}

/// Every `n >= 1` with `sqf(n) * n < q`, as a bitset with a rank directory
/// so that `sqf` can be read back in constant time.
struct SmallSqf {
    bits: Vec<u64>,
    rank: Vec<u32>,
    values: Vec<u32>,
    sorted: Vec<u64>,
}

impl SmallSqf {
    fn new(q: u64) -> Self {
        // n = d x^2 with d squarefree has d * n = (d x)^2
        let root = isqrt(q as u128 - 1) as u64;
        let flags = squarefree_flags(root);
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        for d in 1..=root {
            if !flags[d as usize] {
                continue;
            }
            let mut x = 1;
            while d * x <= root {
                pairs.push((d * x * x, d as u32));
                x += 1;
            }
        }
        pairs.sort_unstable();
        let words = (q as usize).div_ceil(64);
        let mut bits = vec![0u64; words];
        for &(n, _) in &pairs {
            bits[(n / 64) as usize] |= 1 << (n % 64);
        }
        let mut rank = Vec::with_capacity(words);
        let mut acc = 0u32;
        for w in &bits {
            rank.push(acc);
            acc += w.count_ones();
        }
        SmallSqf {
            bits,
            rank,
            values: pairs.iter().map(|p| p.1).collect(),
            sorted: pairs.iter().map(|p| p.0).collect(),
        }
    }

    #[inline]
    fn get(&self, n: u64) -> Option<u64> {
        let w = (n / 64) as usize;
        let bit = 1u64 << (n % 64);
        let word = *self.bits.get(w)?;
        if word & bit == 0 {
            return None;
        }
        let idx = self.rank[w] + (word & (bit - 1)).count_ones();
        Some(self.values[idx as usize] as u64)
    }
}

/// Coprime `a, b >= 1` with `sqf(a) sqf(b) sqf(a + b) max(a, b) < B^2`.
///
/// Pairs with `a < b` are found from `b = d_2 y^2` and `a + b = d_3 z^2`;
/// every factor in the product is at least one, so `d_2 b < B^2` and
/// `d_1 a < B^2` restrict `a` and `b` to the small set `{n : sqf(n) n < B^2}`.
pub fn count_football222(bound: f64) -> Result<u64> {
    if !(bound >= 1.0) {
        return domain("bound must be >= 1");
    }
    let q = strict_bound(bound * bound);
    let q = u64::try_from(q).map_err(|_| Error::Overflow("count_football222"))?;
    if q <= 2 {
        return Ok(0);
    }
    let small = SmallSqf::new(q);
    // d3 <= min(t, 2b) <= sqrt(2 q)
    let flags = squarefree_flags(isqrt(2 * q as u128) as u64 + 1);
    let below: u64 = small
        .sorted
        .par_iter()
        .filter(|&&b| b >= 2)
        .map(|&b| {
            let d2 = small.get(b).expect("b is in the set");
            // d1 * d3 <= t
            let t = (q - 1) / (d2 * b);
            let mut count = 0u64;
            let d3_max = t.min(2 * b);
            for d3 in 1..=d3_max {
                if !flags[d3 as usize] {
                    continue;
                }
                // b < d3 z^2 < 2b
                let mut z = isqrt((b / d3) as u128) as u64;
                while d3 * z * z <= b {
                    z += 1;
                }
                while d3 * z * z < 2 * b {
                    let a = d3 * z * z - b;
                    if let Some(d1) = small.get(a) {
                        if d1 * d3 <= t && a.gcd(&b) == 1 {
                            count += 1;
                        }
                    }
                    z += 1;
                }
            }
            count
        })
        .sum();
    // (1, 1) has product 2
    Ok(2 * below + 1)
}

/// Twice the number of primitive irreducible `a x^2 + b x + c` with `a > 0`
/// and `M(f) < B^2`.
///
/// For integral `B^2` the comparison is exact; otherwise it is made in
/// floating point on `max(|a|, |c|, (|b| + sqrt(disc)) / 2)`.
pub fn count_quadratic_points(bound: f64) -> Result<u64> {
    if !(bound >= 1.0) {
        return domain("bound must be >= 1");
    }
    let k2 = bound * bound;
    let snapped = super::snap(k2);
    let exact = snapped.fract() == 0.0;
    let k = strict_bound(k2);
    let k = i128::try_from(k).map_err(|_| Error::Overflow("count_quadratic_points"))?;
    let below = |a: i128, b: i128, c: i128| -> Result<bool> {
        if exact {
            arith::mahler_measure_quadratic_below(a, b, c, k as u128)
        } else {
            Ok(mahler_max_formula(a, b, c) < snapped)
        }
    };
    let rows: Vec<i128> = (1..k).collect();
    let counts = rows
        .into_par_iter()
        .map(|a| -> Result<u64> {
            let mut n = 0u64;
            for c in (1 - k)..k {
                if c == 0 {
                    continue;
                }
                let g = a.gcd(&c);
                for b in (1 - 2 * k)..(2 * k) {
                    if g.gcd(&b) != 1 {
                        continue;
                    }
                    let disc = b * b - 4 * a * c;
                    if disc >= 0 && isqrt(disc as u128).pow(2) == disc as u128 {
                        continue;
                    }
                    if below(a, b, c)? {
                        n += 1;
                    }
                }
            }
            Ok(n)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(2 * counts.iter().sum::<u64>())
}

/// `max(|a|, |c|, (|b| + sqrt(b^2 - 4ac)) / 2)`, the Mahler measure of a
/// quadratic.
fn mahler_max_formula(a: i128, b: i128, c: i128) -> f64 {
    let disc = (b * b - 4 * a * c) as f64;
    let mut m = (a.abs() as f64).max(c.abs() as f64);
    if disc >= 0.0 {
        m = m.max((b.abs() as f64 + disc.sqrt()) / 2.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_bmun(n: u32, y: i128) -> u64 {
        let range = if n % 2 == 0 { -y..=y } else { 1..=y };
        range
            .filter(|&k| k != 0 && arith::is_power_free(k, n).unwrap())
            .count() as u64
    }

    #[test]
    fn bmun_examples() {
        assert_eq!(count_bmun(2, 1.0).unwrap(), 2);
        assert_eq!(count_bmun(2, 2.0).unwrap(), 6);
        assert_eq!(count_bmun(3, 2.0).unwrap(), 7);
        assert!(count_bmun(1, 2.0).is_err());
        assert!(count_bmun(2, 0.5).is_err());
    }

    #[test]
    fn bmun_matches_brute_force() {
        for n in 2..=4u32 {
            for b in [1.0, 1.5, 2.0, 3.3, 7.0, 20.0] {
                let y = (b as f64).powi(n as i32).floor() as i128;
                if y > 200_000 {
                    continue;
                }
                assert_eq!(count_bmun(n, b).unwrap(), brute_bmun(n, y), "n = {n} B = {b}");
            }
        }
        // sqrt(2)^2 snaps to 2
        assert_eq!(count_bmun(2, 2f64.sqrt()).unwrap(), brute_bmun(2, 2));
    }

    fn brute_fields(x: i128) -> u64 {
        (-x..=x)
            .filter(|&d| d != 0 && d != 1 && arith::is_power_free(d, 2).unwrap())
            .filter(|&d| arith::fundamental_discriminant(d).unwrap().abs() <= x)
            .count() as u64
    }

    #[test]
    fn quadratic_field_examples() {
        assert_eq!(count_quadratic_fields(2).unwrap(), 0);
        assert_eq!(count_quadratic_fields(4).unwrap(), 2);
        // -3, -4, 5, -7, 8, -8
        assert_eq!(count_quadratic_fields(8).unwrap(), 6);
        for x in [3, 12, 100, 1000, 20_000] {
            assert_eq!(count_quadratic_fields(x).unwrap(), brute_fields(x as i128), "X = {x}");
        }
    }

    fn brute_rooted3(q: u128) -> u64 {
        let mut n = 0;
        for a in 1..=64u128 {
            for b in 1..=64u128 {
                let m = a.max(b).pow(4);
                if a.gcd(&b) == 1 && arith::power_free_part(a as i128, 3).unwrap() * m < q {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn rooted3_examples() {
        assert_eq!(count_rooted3_at_0(10f64.cbrt()).unwrap(), 1);
        assert_eq!(count_rooted3_at_0(1.0).unwrap(), 0);
        assert_eq!(count_rooted3_at_0(2f64.cbrt()).unwrap(), 1);
    }

    #[test]
    fn rooted3_matches_brute_force() {
        // 64^4 > 2e7, so the brute-force box is large enough
        for q in [2u128, 17, 100, 1000, 12_345, 200_000, 5_000_000, 16_000_000] {
            let b = (q as f64).cbrt();
            assert_eq!(count_rooted3_at_0(b).unwrap(), brute_rooted3(strict_bound(b.powi(3))), "B^3 = {q}");
        }
    }

    fn brute_football(q: u128) -> u64 {
        let q = q as i128;
        let mut n = 0;
        for a in 1..q {
            for b in 1..q {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let s = |x: i128| arith::squarefree_part(x).unwrap() as i128;
                if s(a) * s(b) * s(a + b) * a.max(b) < q {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn football_examples() {
        assert_eq!(count_football222(1.0).unwrap(), 0);
        assert_eq!(count_football222(2f64.sqrt()).unwrap(), 0);
        assert_eq!(count_football222(2.0).unwrap(), brute_football(4));
        assert!(count_football222(2.0).unwrap() >= 1);
    }

    #[test]
    fn football_matches_brute_force() {
        for b in [1.5, 2.0, 3.0, 5.5, 10.0, 17.0, 30.0] {
            let q = strict_bound(b * b);
            assert_eq!(count_football222(b).unwrap(), brute_football(q), "B = {b}");
        }
    }

    fn brute_quadratic_points(k: i128) -> u64 {
        let mut n = 0;
        for a in 1..=k {
            for b in -2 * k..=2 * k {
                for c in -k..=k {
                    if a.gcd(&b).gcd(&c) != 1 {
                        continue;
                    }
                    let disc = b * b - 4 * a * c;
                    let r = (disc.max(0) as f64).sqrt().round() as i128;
                    if disc >= 0 && r * r == disc {
                        continue;
                    }
                    if mahler_max_formula(a, b, c) < k as f64 {
                        n += 1;
                    }
                }
            }
        }
        2 * n
    }

    #[test]
    fn quadratic_point_examples() {
        // M(f) >= 1 always, and the bound is strict
        assert_eq!(count_quadratic_points(1.0).unwrap(), 0);
        assert!(count_quadratic_points(0.5).is_err());
        let two = count_quadratic_points(2f64.sqrt()).unwrap();
        assert_eq!(two, brute_quadratic_points(2));
        let mut last = 0;
        for b in [1.5, 2.0, 2.5, 3.0, 4.0] {
            let k = strict_bound(b * b) as i128;
            let n = count_quadratic_points(b).unwrap();
            if super::super::snap(b * b).fract() == 0.0 {
                assert_eq!(n, brute_quadratic_points(k), "B = {b}");
            }
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn thread_count_does_not_change_counts() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                (
                    count_football222(60.0).unwrap(),
                    count_quadratic_points(3.0).unwrap(),
                    count_bmun(3, 30.0).unwrap(),
                )
            })
        };
        assert_eq!(run(1), run(4));
    }
}
