//! Primality testing and integer factorization for operands up to 128 bits.
//!
//! Small factors are removed by trial division; whatever remains is split
//! with Pollard's rho using Brent's cycle detection, and every cofactor is
//! certified with Miller-Rabin. For moduli below 2^64 products are taken in
//! native `u128`; wider moduli fall back to a double-and-add multiplication.

use std::sync::OnceLock;

use num_integer::Integer;

/// Trial division covers every prime below this bound before rho takes over.
const TRIAL_BOUND: u32 = 1 << 12;

/// Miller-Rabin with the first 13 prime bases is exact below this value.
const MR13_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::new();
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        // both operands are reduced, so the product fits
        (a % m) * (b % m) % m
    } else {
        let (mut a, mut b) = (a % m, b % m);
        let mut r = 0;
        while b > 0 {
            if b & 1 == 1 {
                r = add_mod(r, a, m);
            }
            a = add_mod(a, a, m);
            b >>= 1;
        }
        r
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime(n: u128, d: u128, s: u32, base: u128) -> bool {
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin primality test.
///
/// Deterministic below 3.3e24 (first 13 prime bases); above that 20 bases
/// are used.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in MR_BASES.iter() {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let bases = if n < MR13_LIMIT {
        &MR_BASES[..13]
    } else {
        &MR_BASES[..]
    };
    bases.iter().all(|&a| strong_probable_prime(n, d, s, a))
}

/// One Brent run with polynomial x^2 + c. Returns a nontrivial divisor or
/// `None` when the cycle closed without one.
fn brent(n: u128, c: u128) -> Option<u128> {
    const BLOCK: u128 = 128;
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let mut y: u128 = 2;
    let mut x = y;
    let mut ys = y;
    let mut r: u128 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BLOCK.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BLOCK;
        }
        r *= 2;
    }
    if g == n {
        // the block product overshot; replay one step at a time
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1;
    loop {
        if let Some(d) = brent(n, c) {
            return d;
        }
        c += 1;
    }
}

/// Factor `n >= 1` into `(prime, exponent)` pairs with strictly increasing
/// primes. `factor_u128(1)` is empty.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    debug_assert!(n >= 1);
    let mut out: Vec<(u128, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u128;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut large: Vec<u128> = Vec::new();
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                large.push(m);
                continue;
            }
            // a perfect square defeats x^2 + c rarely, but check cheaply
            let r = isqrt(m);
            if r * r == m {
                stack.push(r);
                stack.push(r);
                continue;
            }
            let d = split_composite(m);
            stack.push(d);
            stack.push(m / d);
        }
        large.sort_unstable();
        for p in large {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

/// Integer square root (floor).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // correct the float estimate in both directions
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Floor of the `k`-th root of `n`.
pub fn iroot(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / k as f64) as u128;
    let fits = |x: u128| x.checked_pow(k).is_some_and(|v| v <= n);
    while x > 0 && !fits(x) {
        x -= 1;
    }
    while fits(x + 1) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_factor(mut n: u128) -> Vec<(u128, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn primality_small_range_matches_trial_division() {
        for n in 0u128..5000 {
            let expected = n >= 2 && trial_factor(n) == vec![(n, 1)];
            assert_eq!(is_prime(n), expected, "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [
            2047u128,
            1_373_653,
            25_326_001,
            3_215_031_751,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
            3_825_123_056_546_413_051,
            318_665_857_834_031_151_167_461,
        ] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn known_large_primes() {
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(is_prime((1u128 << 89) - 1)); // Mersenne M89
        assert!(is_prime((1u128 << 127) - 1)); // Mersenne M127
        assert!(!is_prime((1u128 << 67) - 1));
    }

    #[test]
    fn factor_matches_trial_division_oracle() {
        // value chosen before the build and checked with the trial oracle
        assert_eq!(trial_factor(600_851_475_143), vec![(71, 1), (839, 1), (1471, 1), (6857, 1)]);
        assert_eq!(factor_u128(600_851_475_143), trial_factor(600_851_475_143));
        for n in 1u128..20_000 {
            assert_eq!(factor_u128(n), trial_factor(n), "n = {n}");
        }
    }

    #[test]
    fn factor_semiprimes_beyond_trial_range() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        assert_eq!(factor_u128(p * q), vec![(q, 1), (p, 1)]);
        assert_eq!(factor_u128(p * p * q), vec![(q, 1), (p, 2)]);
        // M67 = 193707721 * 761838257287
        assert_eq!(
            factor_u128((1u128 << 67) - 1),
            vec![(193_707_721, 1), (761_838_257_287, 1)]
        );
        // product of two primes above 2^64
        let big = 18_446_744_073_709_551_629u128; // next prime after 2^64
        assert!(is_prime(big));
        assert_eq!(factor_u128(big * 5 * 5), vec![(5, 2), (big, 1)]);
    }

    #[test]
    fn roots() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u128::MAX), u64::MAX as u128);
        assert_eq!(iroot(1_000_000_000, 3), 1000);
        assert_eq!(iroot(999_999_999, 3), 999);
        assert_eq!(iroot(1 << 40, 4), 1024);
        assert_eq!(iroot(u128::MAX, 2), u64::MAX as u128);
    }
}
