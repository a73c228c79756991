//! Exact integer primitives: factorization, valuations, power-free parts,
//! fundamental discriminants and the Mahler measure of quadratics.

mod mahler;
pub mod prime;

pub use mahler::{mahler_measure_quadratic, mahler_measure_quadratic_below};
pub use prime::{factor_u128, iroot, is_prime, isqrt};

use crate::error::{domain, Error, Result};

/// A nonzero integer as a sign and its prime factorization.
///
/// Primes are strictly increasing and every exponent is at least one, so two
/// `FactoredInt`s are equal exactly when the integers they represent are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    negative: bool,
    factors: Vec<(u128, u32)>,
}

impl FactoredInt {
    pub fn one() -> Self {
        FactoredInt { negative: false, factors: Vec::new() }
    }

    /// Build from explicit parts, checking the canonical-form invariants.
    pub fn from_parts(negative: bool, factors: Vec<(u128, u32)>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return domain("primes must be strictly increasing");
            }
        }
        for &(p, e) in &factors {
            if e == 0 {
                return domain("exponents must be positive");
            }
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(FactoredInt { negative, factors })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn ord(&self, p: u128) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map_or(0, |i| self.factors[i].1)
    }

    /// |n| as a `u128`, or `None` on overflow.
    pub fn abs_value(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    /// The represented integer, or `None` if it does not fit in `i128`.
    pub fn value(&self) -> Option<i128> {
        let v = self.abs_value()?;
        if self.negative {
            if v == 1u128 << 127 {
                Some(i128::MIN)
            } else {
                i128::try_from(v).ok().map(|v| -v)
            }
        } else {
            i128::try_from(v).ok()
        }
    }

    pub fn abs(&self) -> FactoredInt {
        FactoredInt { negative: false, factors: self.factors.clone() }
    }
}

/// Factor a nonzero integer.
pub fn factor(n: i128) -> Result<FactoredInt> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    Ok(FactoredInt {
        negative: n < 0,
        factors: factor_u128(n.unsigned_abs()),
    })
}

/// The `p`-adic valuation of a nonzero integer.
pub fn ord(n: i128, p: u128) -> Result<u32> {
    if n == 0 {
        return domain("ord of 0 is infinite");
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m = n.unsigned_abs();
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Ok(e)
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return domain(format!("power-free parts need m >= 2, got {m}"));
    }
    Ok(())
}

/// Exponent of `p` in the `m`-power-free complement of `p^e`.
#[inline]
pub fn complement_exponent(e: u32, m: u32) -> u32 {
    (m - e % m) % m
}

/// The `m`-power-free complement `Phi_m(N)`: the unique `m`-power-free
/// positive integer whose product with `|N|` is a perfect `m`-th power.
pub fn power_free_part(n: i128, m: u32) -> Result<u128> {
    check_m(m)?;
    power_free_part_of(&factor(n)?, m)
}

/// `Phi_m` of an already factored integer.
pub fn power_free_part_of(n: &FactoredInt, m: u32) -> Result<u128> {
    check_m(m)?;
    n.factors().iter().try_fold(1u128, |acc, &(p, e)| {
        p.checked_pow(complement_exponent(e, m))
            .and_then(|f| acc.checked_mul(f))
            .ok_or(Error::Overflow("power_free_part"))
    })
}

/// Write `N = M * k^m` with `|M|` free of `m`-th powers and `sign(M) = sign(N)`.
pub fn power_free_reduce(n: i128, m: u32) -> Result<(i128, u128)> {
    check_m(m)?;
    let f = factor(n)?;
    let mut core: u128 = 1;
    let mut k: u128 = 1;
    for &(p, e) in f.factors() {
        // both pieces divide |n|, so they cannot overflow
        core *= p.pow(e % m);
        k *= p.pow(e / m);
    }
    let core = core as i128;
    Ok((if n < 0 { -core } else { core }, k))
}

/// The squarefree part `sqf(n) = Phi_2(n)`.
pub fn squarefree_part(n: i128) -> Result<u128> {
    power_free_part(n, 2)
}

pub fn is_power_free(n: i128, m: u32) -> Result<bool> {
    check_m(m)?;
    Ok(factor(n)?.factors().iter().all(|&(_, e)| e < m))
}

/// Discriminant of the quadratic field `Q(sqrt d)` for squarefree `d`:
/// `d` when `d = 1 mod 4`, otherwise `4d`.
pub fn fundamental_discriminant(d: i128) -> Result<i128> {
    if d == 0 || d == 1 {
        return domain(format!("Q(sqrt {d}) is not a quadratic field"));
    }
    if !is_power_free(d, 2)? {
        return domain(format!("{d} is not squarefree"));
    }
    if d.rem_euclid(4) == 1 {
        Ok(d)
    } else {
        d.checked_mul(4).ok_or(Error::Overflow("fundamental_discriminant"))
    }
}
