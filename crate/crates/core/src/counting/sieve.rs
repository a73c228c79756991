use rayon::prelude::*;

use crate::arith::isqrt;
use crate::error::{domain, Error, Result};

/// Elements per sieve segment.
pub const SEGMENT: u64 = 1 << 24;

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `mu(k)` for `0 <= k <= n` (`mu(0)` is stored as 0).
pub fn mobius_up_to(n: u64) -> Vec<i8> {
    let n = n as usize;
    let mut mu = vec![1i8; n + 1];
    mu[0] = 0;
    let mut composite = vec![false; n + 1];
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        for j in (i..=n).step_by(i) {
            if j > i {
                composite[j] = true;
            }
            mu[j] = -mu[j];
        }
        if let Some(sq) = i.checked_mul(i) {
            for j in (sq..=n).step_by(sq) {
                mu[j] = 0;
            }
        }
    }
    mu
}

/// `flags[k]` is true when `k >= 1` is squarefree, for `0 <= k <= n`.
pub fn squarefree_flags(n: u64) -> Vec<bool> {
    let mut flags = vec![true; n as usize + 1];
    flags[0] = false;
    for p in primes_up_to(isqrt(n as u128) as u64) {
        let sq = (p * p) as usize;
        for j in (sq..flags.len()).step_by(sq) {
            flags[j] = false;
        }
    }
    flags
}

/// `Phi_m(k)` for `k = 1..=limit`; entry `k - 1` holds `Phi_m(k)`.
///
/// Segmented over [`SEGMENT`]-sized windows processed in parallel and
/// concatenated in order. Fails with an overflow error if some `Phi_m(k)`
/// exceeds `u64`.
pub fn sieve_power_free_parts(limit: u64, m: u32) -> Result<Vec<u64>> {
    if limit == 0 {
        return domain("sieve limit must be positive");
    }
    if m < 2 {
        return domain(format!("power-free parts need m >= 2, got {m}"));
    }
    let primes = primes_up_to(isqrt(limit as u128) as u64);
    let starts: Vec<u64> = (0..limit.div_ceil(SEGMENT)).map(|i| 1 + i * SEGMENT).collect();
    let chunks = starts
        .into_par_iter()
        .map(|lo| sieve_segment(lo, (lo + SEGMENT).min(limit + 1), m, &primes))
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}

fn sieve_segment(lo: u64, hi: u64, m: u32, primes: &[u64]) -> Result<Vec<u64>> {
    let overflow = || Error::Overflow("sieve_power_free_parts");
    let mut rest: Vec<u64> = (lo..hi).collect();
    let mut phi = vec![1u64; rest.len()];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        for k in (first..hi).step_by(p as usize) {
            let i = (k - lo) as usize;
            let mut e = 0;
            while rest[i] % p == 0 {
                rest[i] /= p;
                e += 1;
            }
            let c = crate::arith::complement_exponent(e, m);
            phi[i] = p.checked_pow(c).and_then(|f| phi[i].checked_mul(f)).ok_or_else(overflow)?;
        }
    }
    for (f, &r) in phi.iter_mut().zip(&rest) {
        // a leftover cofactor is a single prime to the first power
        if r > 1 {
            *f = r.checked_pow(m - 1).and_then(|x| f.checked_mul(x)).ok_or_else(overflow)?;
        }
    }
    Ok(phi)
}
