//! Parsers for the textual argument formats.

use std::str::FromStr;

use stacky_heights::football::{Root, StackDivisor};

/// A malformed argument or config; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Comma-separated values, e.g. `4,6`.
pub fn list<T: FromStr>(s: &str) -> Result<Vec<T>, UsageError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| UsageError(format!("bad number {x:?} in {s:?}"))))
        .collect()
}

pub fn pair<T: FromStr>(s: &str) -> Result<(T, T), UsageError> {
    let mut v = list::<T>(s)?;
    if v.len() != 2 {
        return usage(format!("expected two values, got {s:?}"));
    }
    let b = v.pop().unwrap();
    Ok((v.pop().unwrap(), b))
}

/// `u,v,m;u,v,m;...`, one root `u X + v Y` of order `m` per group.
pub fn roots(s: &str) -> Result<Vec<Root>, UsageError> {
    s.split(';')
        .filter(|g| !g.trim().is_empty())
        .map(|g| match list::<i128>(g)?.as_slice() {
            &[u, v, m] if m >= 0 && m <= u32::MAX as i128 => Ok(Root { u, v, order: m as u32 }),
            _ => usage(format!("root {g:?} must be u,v,order")),
        })
        .collect()
}

/// `d;n1,n2,...`: generic degree, then one coefficient per root.
pub fn divisor(s: &str) -> Result<StackDivisor, UsageError> {
    let (d, rest) = s.split_once(';').unwrap_or((s, ""));
    let generic = d.trim().parse().map_err(|_| UsageError(format!("bad generic degree in {s:?}")))?;
    let stacky = if rest.trim().is_empty() { Vec::new() } else { list(rest)? };
    Ok(StackDivisor::new(generic, stacky))
}

/// `p/q` or an integer.
pub fn rational(s: &str) -> Result<(i128, i128), UsageError> {
    let bad = || UsageError(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?)),
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
    }
}
