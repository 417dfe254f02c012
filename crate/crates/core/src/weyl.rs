//! Weyl-group combinatorics for `GL(h)` and `Sp(2n)` with a standard Levi.
//!
//! In both supported families `W_L` is a Young subgroup of the permutations
//! of `t1..tn` (no sign changes), so every Levi is described by a list of
//! contiguous variable blocks.

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{elementary_symmetric, elementary_symmetric_squares, Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("group rank must be at least 1")]
    ZeroRank,
    #[error("composition {parts:?} must have positive entries summing to {rank}")]
    BadComposition { parts: Vec<usize>, rank: usize },
    #[error("{levi} is not a Levi type for {group}")]
    LeviMismatch { group: String, levi: String },
    #[error("frobenius power q must be at least 1")]
    ZeroPower,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {q} is not a positive power of p = {p}")]
    NotPowerOfPrime { q: u64, p: u64 },
    #[error("Poincare quotient is not a polynomial (internal error)")]
    InexactDivision,
    #[error("Poincare series coefficient overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    /// `GL(h)`, torus rank `h`.
    Gl { h: usize },
    /// `Sp(2n)`, torus rank `n`.
    Sp { n: usize },
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        match *self {
            GroupSpec::Gl { h } => h,
            GroupSpec::Sp { n } => n,
        }
    }

    /// Degrees of the fundamental invariants of `W_G`.
    pub fn invariant_degrees(&self) -> Vec<u32> {
        match *self {
            GroupSpec::Gl { h } => (1..=h as u32).collect(),
            GroupSpec::Sp { n } => (1..=n as u32).map(|i| 2 * i).collect(),
        }
    }

    pub fn weyl_order(&self) -> BigUint {
        match *self {
            GroupSpec::Gl { h } => factorial(h),
            GroupSpec::Sp { n } => factorial(n) << n,
        }
    }

    /// Coxeter generators of `W_G` together with all single sign flips for `Sp`.
    pub fn weyl_generators(&self) -> Vec<SignedPermutation> {
        let n = self.rank();
        let mut gens: Vec<_> = (0..n.saturating_sub(1))
            .map(|i| SignedPermutation::transposition(n, i, i + 1))
            .collect();
        if let GroupSpec::Sp { .. } = self {
            gens.extend((0..n).map(|i| SignedPermutation::sign_flip(n, i)));
        }
        gens
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Gl { h } => write!(f, "GL({h})"),
            GroupSpec::Sp { n } => write!(f, "Sp({})", 2 * n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeviSpec {
    /// Ordered block sizes of a standard Levi of `GL(h)`.
    Composition(Vec<usize>),
    /// Maximal torus of `Sp(2n)`.
    Borel,
    /// `GL(n)` inside `Sp(2n)`, stabilizer of a Lagrangian.
    Siegel,
}

impl fmt::Display for LeviSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeviSpec::Composition(parts) => {
                let s: Vec<String> = parts.iter().map(usize::to_string).collect();
                write!(f, "({})", s.join(","))
            }
            LeviSpec::Borel => f.write_str("borel"),
            LeviSpec::Siegel => f.write_str("siegel"),
        }
    }
}

/// `t_i -> ±t_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub negate: Vec<bool>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            negate: vec![false; n],
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut s = Self::identity(n);
        s.perm.swap(i, j);
        s
    }

    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut s = Self::identity(n);
        s.negate[i] = true;
        s
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        p.signed_permute(&self.perm, &self.negate)
    }
}

/// A validated pair of group and Levi type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParabolic")]
pub struct Parabolic {
    group: GroupSpec,
    levi: LeviSpec,
}

#[derive(Deserialize)]
struct RawParabolic {
    group: GroupSpec,
    levi: LeviSpec,
}

impl TryFrom<RawParabolic> for Parabolic {
    type Error = WeylError;
    fn try_from(raw: RawParabolic) -> Result<Self, Self::Error> {
        Parabolic::new(raw.group, raw.levi)
    }
}

impl Parabolic {
    pub fn new(group: GroupSpec, levi: LeviSpec) -> Result<Self, WeylError> {
        let rank = group.rank();
        if rank == 0 {
            return Err(WeylError::ZeroRank);
        }
        match (&group, &levi) {
            (GroupSpec::Gl { h }, LeviSpec::Composition(parts)) => {
                if parts.contains(&0) || parts.iter().sum::<usize>() != *h {
                    return Err(WeylError::BadComposition {
                        parts: parts.clone(),
                        rank: *h,
                    });
                }
            }
            (GroupSpec::Sp { .. }, LeviSpec::Borel | LeviSpec::Siegel) => {}
            _ => {
                return Err(WeylError::LeviMismatch {
                    group: group.to_string(),
                    levi: levi.to_string(),
                })
            }
        }
        Ok(Parabolic { group, levi })
    }

    /// `GL(h)` with Levi block sizes `parts`.
    pub fn gl(parts: &[usize]) -> Result<Self, WeylError> {
        Self::new(
            GroupSpec::Gl {
                h: parts.iter().sum(),
            },
            LeviSpec::Composition(parts.to_vec()),
        )
    }

    /// The display datum `(h, d)`: blocks `(d, h - d)`, empty blocks dropped.
    pub fn display(h: usize, d: usize) -> Result<Self, WeylError> {
        if d > h {
            return Err(WeylError::BadComposition {
                parts: vec![d, h.saturating_sub(d)],
                rank: h,
            });
        }
        let parts: Vec<usize> = [d, h - d].into_iter().filter(|&n| n > 0).collect();
        Self::new(GroupSpec::Gl { h }, LeviSpec::Composition(parts))
    }

    pub fn sp_borel(n: usize) -> Result<Self, WeylError> {
        Self::new(GroupSpec::Sp { n }, LeviSpec::Borel)
    }

    pub fn sp_siegel(n: usize) -> Result<Self, WeylError> {
        Self::new(GroupSpec::Sp { n }, LeviSpec::Siegel)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn levi(&self) -> &LeviSpec {
        &self.levi
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    /// Sizes of the `W_L` blocks, in variable order.
    pub fn block_sizes(&self) -> Vec<usize> {
        match &self.levi {
            LeviSpec::Composition(parts) => parts.clone(),
            LeviSpec::Borel => vec![1; self.rank()],
            LeviSpec::Siegel => vec![self.rank()],
        }
    }

    pub fn blocks(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.block_sizes()
            .into_iter()
            .map(|m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }

    /// Adjacent transpositions inside each block.
    pub fn levi_generators(&self) -> Vec<SignedPermutation> {
        let n = self.rank();
        self.blocks()
            .into_iter()
            .flat_map(|b| (b.start..b.end.saturating_sub(1)).map(move |i| SignedPermutation::transposition(n, i, i + 1)))
            .collect()
    }

    /// Degrees of the fundamental invariants of `W_L` (`1..m` per block).
    pub fn levi_invariant_degrees(&self) -> Vec<u32> {
        self.block_sizes()
            .into_iter()
            .flat_map(|m| 1..=m as u32)
            .collect()
    }

    /// Representative of the `W_L`-orbit of `m`: exponents sorted
    /// decreasingly inside each block, the grevlex-largest orbit member.
    pub fn orbit_representative(&self, m: &Monomial) -> Monomial {
        let mut exps = m.exponents().to_vec();
        for b in self.blocks() {
            exps[b].sort_unstable_by(|a, b| b.cmp(a));
        }
        Monomial::new(exps)
    }

    /// Orbit representatives of degree `degree`, largest first.
    pub fn orbit_representatives(&self, degree: u32) -> Vec<Monomial> {
        let sizes = self.block_sizes();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.rank());
        collect_representatives(&sizes, degree, &mut current, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Sum of all monomials in the `W_L`-orbit of `rep`, each with coefficient 1.
    pub fn orbit_sum(&self, rep: &Monomial) -> Poly {
        let n = self.rank();
        let mut members: Vec<Vec<u32>> = vec![Vec::with_capacity(n)];
        for b in self.blocks() {
            let mut block: Vec<u32> = rep.exponents()[b].to_vec();
            block.sort_unstable();
            let mut arrangements = Vec::new();
            loop {
                arrangements.push(block.clone());
                if !next_permutation(&mut block) {
                    break;
                }
            }
            members = members
                .into_iter()
                .flat_map(|prefix| {
                    arrangements.iter().map(move |a| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(a);
                        v
                    })
                })
                .collect();
        }
        Poly::from_terms(
            n,
            members
                .into_iter()
                .map(|e| (Monomial::new(e), num_bigint::BigInt::one())),
        )
    }

    /// Number of monomials in the `W_L`-orbit of `m`.
    pub fn orbit_size(&self, m: &Monomial) -> u64 {
        let mut size = 1u64;
        for b in self.blocks() {
            let mut block = m.exponents()[b].to_vec();
            block.sort_unstable();
            // multinomial coefficient built up one slot at a time
            let mut run = 0u64;
            for (i, e) in block.iter().enumerate() {
                run = if i > 0 && block[i - 1] == *e { run + 1 } else { 1 };
                size = size * (i as u64 + 1) / run;
            }
        }
        size
    }

    /// Integral basis of the degree-`degree` part of `S^{W_L}` by orbit sums.
    pub fn invariant_basis(&self, degree: u32) -> Vec<Poly> {
        self.orbit_representatives(degree)
            .iter()
            .map(|r| self.orbit_sum(r))
            .collect()
    }

    /// Number of `W_L`-orbits of degree-`degree` monomials, counted without
    /// building any polynomial.
    pub fn invariant_basis_size(&self, degree: u32) -> u64 {
        let d = degree as usize;
        let mut total = vec![0u64; d + 1];
        total[0] = 1;
        for m in self.block_sizes() {
            // partitions into at most m parts = partitions with parts <= m
            let mut parts = vec![0u64; d + 1];
            parts[0] = 1;
            for part in 1..=m {
                for k in part..=d {
                    parts[k] += parts[k - part];
                }
            }
            let mut next = vec![0u64; d + 1];
            for (i, &a) in total.iter().enumerate() {
                for (j, &b) in parts.iter().enumerate().take(d + 1 - i) {
                    next[i + j] += a * b;
                }
            }
            total = next;
        }
        total[d]
    }

    /// `|W_G / W_L|`.
    pub fn coset_count(&self) -> BigUint {
        let levi: BigUint = self.block_sizes().into_iter().map(factorial).product();
        self.group.weyl_order() / levi
    }

    /// Top degree of the rational quotient: the number of positive roots
    /// outside the Levi.
    pub fn top_degree_bound(&self) -> u32 {
        match (&self.group, &self.levi) {
            (GroupSpec::Gl { .. }, LeviSpec::Composition(parts)) => {
                let mut acc = 0;
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        acc += parts[i] * parts[j];
                    }
                }
                acc as u32
            }
            (GroupSpec::Sp { n }, LeviSpec::Borel) => (n * n) as u32,
            (GroupSpec::Sp { n }, LeviSpec::Siegel) => (n * (n + 1) / 2) as u32,
            _ => unreachable!("validated in Parabolic::new"),
        }
    }

    /// Poincare polynomial of `W_L \ W_G`: the product of `[d]_x` over the
    /// `W_G` degrees divided by the same product over the `W_L` degrees.
    pub fn rational_rank_series(&self) -> Result<Vec<u64>, WeylError> {
        let numerator = q_integer_product(&self.group.invariant_degrees())?;
        let denominator = q_integer_product(&self.levi_invariant_degrees())?;
        let quotient = exact_divide(&numerator, &denominator)?;
        quotient
            .into_iter()
            .map(|c| u64::try_from(c).map_err(|_| WeylError::InexactDivision))
            .collect()
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.group, self.levi)
    }
}

/// A connected zip datum with `q`-power Frobenius as isogeny.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawZipDatum")]
pub struct ZipDatum {
    parabolic: Parabolic,
    q: u64,
    p: Option<u64>,
}

#[derive(Deserialize)]
struct RawZipDatum {
    parabolic: Parabolic,
    q: u64,
    p: Option<u64>,
}

impl TryFrom<RawZipDatum> for ZipDatum {
    type Error = WeylError;
    fn try_from(raw: RawZipDatum) -> Result<Self, Self::Error> {
        ZipDatum::new(raw.parabolic, raw.q, raw.p)
    }
}

impl ZipDatum {
    pub fn new(parabolic: Parabolic, q: u64, p: Option<u64>) -> Result<Self, WeylError> {
        if q == 0 {
            return Err(WeylError::ZeroPower);
        }
        if let Some(p) = p {
            if !is_prime(p) {
                return Err(WeylError::NotPrime(p));
            }
            if !is_positive_power(q, p) {
                return Err(WeylError::NotPowerOfPrime { q, p });
            }
        }
        Ok(ZipDatum { parabolic, q, p })
    }

    /// The level-one display datum `(h, d)` at the prime `p` (`q = p`).
    pub fn display(h: usize, d: usize, p: u64) -> Result<Self, WeylError> {
        Self::new(Parabolic::display(h, d)?, p, Some(p))
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.parabolic
    }

    pub fn group(&self) -> &GroupSpec {
        self.parabolic.group()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> Option<u64> {
        self.p
    }
}

impl fmt::Display for ZipDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, q = {}", self.parabolic, self.q)
    }
}

/// Fundamental `W_G`-invariants with their degrees: elementary symmetric
/// functions for `GL`, the same functions in the squares `t_i^2` for `Sp`.
pub fn invariant_generators(g: &GroupSpec) -> Vec<(Poly, u32)> {
    let n = g.rank();
    (1..=n)
        .map(|k| match g {
            GroupSpec::Gl { .. } => (elementary_symmetric(k, n).expect("k <= n"), k as u32),
            GroupSpec::Sp { .. } => (
                elementary_symmetric_squares(k, n).expect("k <= n"),
                2 * k as u32,
            ),
        })
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn is_positive_power(mut q: u64, p: u64) -> bool {
    if q < p {
        return false;
    }
    while q.is_multiple_of(p) {
        q /= p;
    }
    q == 1
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

fn collect_representatives(sizes: &[usize], degree: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    let Some((&m, rest)) = sizes.split_first() else {
        if degree == 0 {
            out.push(Monomial::new(current.clone()));
        }
        return;
    };
    for block_degree in 0..=degree {
        let mut parts = Vec::new();
        partitions_into(block_degree, m, block_degree, &mut Vec::new(), &mut parts);
        for part in parts {
            let len = current.len();
            current.extend(part);
            collect_representatives(rest, degree - block_degree, current, out);
            current.truncate(len);
        }
    }
}

/// Weakly decreasing sequences of length exactly `len` (zero padded) summing
/// to `total` with entries at most `max`.
fn partitions_into(total: u32, len: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == len {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let slots = (len - prefix.len()) as u32;
    for part in (0..=max.min(total)).rev() {
        if part * slots < total {
            break;
        }
        prefix.push(part);
        partitions_into(total - part, len, part, prefix, out);
        prefix.pop();
    }
}

/// Lexicographic successor; returns false after the last arrangement.
fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn q_integer_product(degrees: &[u32]) -> Result<Vec<i128>, WeylError> {
    let mut acc = vec![1i128];
    for &d in degrees {
        let mut next = vec![0i128; acc.len() + d as usize - 1];
        for (i, &a) in acc.iter().enumerate() {
            for k in 0..d as usize {
                next[i + k] = next[i + k].checked_add(a).ok_or(WeylError::Overflow)?;
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn exact_divide(num: &[i128], den: &[i128]) -> Result<Vec<i128>, WeylError> {
    let lead = *den.last().ok_or(WeylError::InexactDivision)?;
    if num.len() < den.len() {
        return Err(WeylError::InexactDivision);
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - den.len() + 1];
    for i in (0..quot.len()).rev() {
        let top = rem[i + den.len() - 1];
        if top % lead != 0 {
            return Err(WeylError::InexactDivision);
        }
        let c = top / lead;
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] = rem[i + j]
                .checked_sub(c.checked_mul(dj).ok_or(WeylError::Overflow)?)
                .ok_or(WeylError::Overflow)?;
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(WeylError::InexactDivision);
    }
    Ok(quot)
}
