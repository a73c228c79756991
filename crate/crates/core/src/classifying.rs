//! Heights on the classifying stacks `B mu_n` and `B(Z/2)` over Q, and Malle
//! exponents of permutation groups.
//!
//! `B mu_n(Q) = Q^* / (Q^*)^n`; a class is represented by an integer with no
//! `n`-th power divisor. The tautological bundle `L` has `L^n` trivialized,
//! so `rep^j` is the value of a section of `(L^j)^n` and the section engine
//! gives `h_{L^j}`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};

use crate::adelic::{height_from_sections, ExactHeight, FactoredRational};
use crate::arith;
use crate::error::{domain, Error, Result};

/// A class in `Q^* / (Q^*)^n`.
///
/// `rep` is `n`-power-free. For odd `n` the sign is an `n`-th power and
/// `rep > 0`; for even `n` the sign is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerClass {
    n: u32,
    rep: i128,
}

impl PowerClass {
    /// Validate an explicit representative.
    pub fn new(n: u32, rep: i128) -> Result<Self> {
        if n < 2 {
            return domain(format!("B mu_n needs n >= 2, got {n}"));
        }
        if rep == 0 || !arith::is_power_free(rep, n)? {
            return domain(format!("{rep} is not a {n}-power-free representative"));
        }
        if n % 2 == 1 && rep < 0 {
            return domain("odd n absorbs the sign; representative must be positive");
        }
        Ok(PowerClass { n, rep })
    }

    pub fn trivial(n: u32) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rep(&self) -> i128 {
        self.rep
    }

    pub fn is_trivial(&self) -> bool {
        self.rep == 1
    }
}

impl fmt::Display for PowerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in Q*/(Q*)^{}", self.rep, self.n)
    }
}

/// The class of `num / den` modulo `n`-th powers.
pub fn class_of(num: i128, den: i128, n: u32) -> Result<PowerClass> {
    if n < 2 {
        return domain(format!("B mu_n needs n >= 2, got {n}"));
    }
    if num == 0 || den == 0 {
        return domain("class_of needs a nonzero rational");
    }
    let x = FactoredRational::new(num, den)?;
    let mut rep: u128 = 1;
    for (&p, &e) in x.exponents() {
        let e = e.rem_euclid(n as i64) as u32;
        rep = p
            .checked_pow(e)
            .and_then(|f| rep.checked_mul(f))
            .ok_or(Error::Overflow("class_of"))?;
    }
    let rep = i128::try_from(rep).map_err(|_| Error::Overflow("class_of"))?;
    let negative = (num < 0) != (den < 0);
    let rep = if negative && n % 2 == 0 { -rep } else { rep };
    Ok(PowerClass { n, rep })
}

/// `h_{L^j}` of a class, `1 <= j <= n - 1`, via the section `rep^j` of
/// `(L^j)^n`. For `j = 1` this is `(1/n) log |rep|`.
pub fn bmun_height(c: &PowerClass, j: u32) -> Result<ExactHeight> {
    if j == 0 || j >= c.n {
        return domain(format!("twist j must lie in 1..{}, got {j}", c.n - 1));
    }
    let section = FactoredRational::from_int(&arith::factor(c.rep)?).pow(j);
    height_from_sections(c.n, &[section])
}

/// Height for `V = L + L^2 + O` on `B mu_3`: `log N + log M` when
/// `|rep| = N M^2` with `N`, `M` squarefree and coprime.
pub fn bmu3_vector_height(c: &PowerClass) -> Result<ExactHeight> {
    if c.n != 3 {
        return domain(format!("the L + L^2 bundle lives on B mu_3, not B mu_{}", c.n));
    }
    Ok(bmun_height(c, 1)? + bmun_height(c, 2)?)
}

/// Height of `Q(sqrt d)` as a point of `B(Z/2)` for the degree-2
/// permutation representation: `(1/2) log |disc Q(sqrt d)|`.
pub fn quadratic_height(d: i128) -> Result<ExactHeight> {
    let disc = arith::fundamental_discriminant(d)?;
    Ok(ExactHeight::log_int(disc)?.scale(&BigRational::new(1.into(), 2.into())))
}

/// A permutation of `{0, ..., n-1}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: u32) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return domain("image list is not a permutation");
            }
        }
        Ok(Perm(images))
    }

    /// Parse 1-based cycle notation such as `"(1 2 3)(4 5)"`; `"()"` is the
    /// identity.
    pub fn parse_cycles(degree: u32, s: &str) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree).collect();
        let s = s.trim();
        if s.is_empty() {
            return Ok(Perm(images));
        }
        let mut moved = HashSet::new();
        for chunk in s.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk
                .strip_prefix('(')
                .ok_or_else(|| Error::Domain(format!("malformed cycle near {chunk:?}")))?;
            let points: Vec<u32> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .ok()
                        .filter(|&v| v >= 1 && v <= degree)
                        .map(|v| v - 1)
                        .ok_or_else(|| Error::Domain(format!("bad point {t:?} for degree {degree}")))
                })
                .collect::<Result<_>>()?;
            for (k, &p) in points.iter().enumerate() {
                if !moved.insert(p) {
                    return domain(format!("point {} appears in two cycles", p + 1));
                }
                images[p as usize] = points[(k + 1) % points.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycle_count(&self) -> u32 {
        let mut seen = vec![false; self.0.len()];
        let mut cycles = 0;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
            }
        }
        cycles
    }
}

/// `ind(pi)`: the degree minus the number of orbits, fixed points included.
pub fn index(pi: &Perm) -> u32 {
    pi.degree() - pi.cycle_count()
}

/// Largest group `generate` will close before giving up.
pub const GROUP_ORDER_CAP: usize = 10_000;

/// A permutation group given by all of its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: u32,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Close the generators under composition.
    pub fn generate(degree: u32, generators: &[Perm]) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return domain("generator degree mismatch");
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if elements.len() >= GROUP_ORDER_CAP {
                        return domain(format!("group order exceeds {GROUP_ORDER_CAP}"));
                    }
                    elements.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        elements.sort();
        Ok(PermGroup { degree, elements })
    }

    /// Accept an explicit element list after checking identity and closure.
    pub fn from_elements(degree: u32, elements: Vec<Perm>) -> Result<Self> {
        if elements.iter().any(|g| g.degree() != degree) {
            return domain("element degree mismatch");
        }
        let set: HashSet<&Perm> = elements.iter().collect();
        if set.len() != elements.len() {
            return domain("duplicate elements");
        }
        if !set.contains(&Perm::identity(degree)) {
            return domain("group must contain the identity");
        }
        for a in &elements {
            for b in &elements {
                if !set.contains(&a.compose(b)) {
                    return domain("element list is not closed under composition");
                }
            }
        }
        let mut elements = elements;
        elements.sort();
        Ok(PermGroup { degree, elements })
    }

    /// `S_n` in its natural action.
    pub fn symmetric(n: u32) -> Result<Self> {
        if n < 2 {
            return Self::generate(n.max(1), &[]);
        }
        let swap = Perm::parse_cycles(n, "(1 2)")?;
        let cycle = Perm((1..n).chain([0]).collect());
        Self::generate(n, &[swap, cycle])
    }

    /// `Z/n` generated by an `n`-cycle.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::generate(n, &[Perm((1..n).chain([0]).collect())])
    }

    /// `A_n`, generated by the 3-cycles `(1 2 k)`.
    pub fn alternating(n: u32) -> Result<Self> {
        let gens = (3..=n)
            .map(|k| Perm::parse_cycles(n, &format!("(1 2 {k})")))
            .collect::<Result<Vec<_>>>()?;
        Self::generate(n, &gens)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn conjugate(&self, by: &Perm) -> PermGroup {
        let inv = by.inverse();
        let mut elements: Vec<Perm> = self.elements.iter().map(|g| by.compose(g).compose(&inv)).collect();
        elements.sort();
        PermGroup { degree: self.degree, elements }
    }
}

/// Malle's exponent `a(G) = max_{pi != 1} 1 / ind(pi)`.
pub fn malle_exponent(g: &PermGroup) -> Result<Ratio<u64>> {
    g.elements
        .iter()
        .filter(|pi| !pi.is_identity())
        .map(index)
        .min()
        .map(|m| Ratio::new(1, m as u64))
        .ok_or_else(|| Error::Domain("trivial group has no Malle exponent".into()))
}
