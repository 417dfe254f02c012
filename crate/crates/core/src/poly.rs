//! Multivariate polynomials over the integers in the torus variables `t1..tn`.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded reverse lexicographic. Every serialization walks the terms from the
//! largest monomial down, so the text form is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },
    #[error("elementary symmetric index {k} out of range for {n} variables")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("frobenius power must be at least 1, got {0}")]
    InvalidPower(u64),
    #[error("substitution needs {expected} images, got {got}")]
    SubstitutionArity { expected: usize, got: usize },
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Exponent vector with one entry per torus variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic: higher total degree wins; on ties the
    /// monomial with the smaller exponent in the last differing variable is larger.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.0.iter().zip(&other.0).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `Z[t1, ..., tn]` in canonical form (no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_term(Monomial::one(nvars), c.into())
    }

    /// The variable `t_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable t{} outside t1..t{nvars}", index + 1);
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::from_term(Monomial(exps), BigInt::one())
    }

    pub fn from_term(monomial: Monomial, coeff: BigInt) -> Self {
        let mut p = Poly::zero(monomial.nvars());
        if !coeff.is_zero() {
            p.terms.insert(monomial, coeff);
        }
        p
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong variable count");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the largest monomial to the smallest.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Largest total degree among the terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.product(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigInt) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The action of the `q`-power Frobenius on `Sym` of the character lattice:
    /// a degree-`d` term is multiplied by `q^d`, i.e. `t_i -> q * t_i`.
    pub fn frobenius_twist(&self, q: u64) -> Result<Poly, PolyError> {
        if q == 0 {
            return Err(PolyError::InvalidPower(q));
        }
        let q = BigInt::from(q);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * num_traits::pow(q.clone(), m.degree() as usize)))
            .collect();
        Ok(Poly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Applies `t_i -> sign_i * t_{perm[i]}`.
    pub fn signed_permute(&self, perm: &[usize], negate: &[bool]) -> Poly {
        assert_eq!(perm.len(), self.nvars);
        assert_eq!(negate.len(), self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; self.nvars];
            let mut odd = false;
            for (i, &e) in m.0.iter().enumerate() {
                exps[perm[i]] = e;
                odd ^= negate[i] && e % 2 == 1;
            }
            out.add_term(Monomial(exps), if odd { -c } else { c.clone() });
        }
        out
    }

    /// Ring map sending `t_i` to `images[i]`; the result lives in the
    /// images' ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::SubstitutionArity {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let Some(target) = images.first().map(Poly::nvars) else {
            // no variables: only constants
            return Ok(self.clone());
        };
        for img in images {
            if img.nvars != target {
                return Err(PolyError::VariableMismatch {
                    left: target,
                    right: img.nvars,
                });
            }
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                term = &term * &img.pow(e);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Text form with caller-supplied variable names.
    pub fn format_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (name, &e) in names.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }

    /// Parses the canonical text form (`2*t1^2 - t1*t2 + 3`) in `nvars` variables.
    pub fn parse(text: &str, nvars: usize) -> Result<Poly, PolyError> {
        let err = |reason: String| PolyError::Parse {
            text: text.to_string(),
            reason,
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut out = Poly::zero(nvars);
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut negative = false;
            if let Some(r) = rest.strip_prefix('-') {
                negative = true;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if !first {
                return Err(err(format!("expected sign before {rest:?}")));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            if term.is_empty() {
                return Err(err("empty term".into()));
            }
            let mut coeff = BigInt::one();
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(var) = factor.strip_prefix('t') {
                    let (idx, exp) = match var.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|e| err(e.to_string()))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err(format!("bad variable {factor:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(err(format!("variable t{idx} outside t1..t{nvars}")));
                    }
                    exps[idx - 1] += exp;
                } else {
                    let c: BigInt = factor
                        .parse()
                        .map_err(|_| err(format!("bad factor {factor:?}")))?;
                    coeff *= c;
                }
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }
}

fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("t{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.format_with(&refs))
    }
}

/// Parses with the variable count set to the largest index that occurs.
impl FromStr for Poly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut max = 0usize;
        let bytes = s.as_bytes();
        for (i, _) in s.match_indices('t') {
            let digits: String = bytes[i + 1..]
                .iter()
                .take_while(|b| b.is_ascii_digit())
                .map(|&b| b as char)
                .collect();
            if let Ok(v) = digits.parse::<usize>() {
                max = max.max(v);
            }
        }
        Poly::parse(s, max)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigInt::one())
    }
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for i in start..=n - need {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut f);
}

fn elementary_with_power(k: usize, n: usize, power: u32) -> Result<Poly, PolyError> {
    if k > n {
        return Err(PolyError::IndexOutOfRange { k, n });
    }
    let mut p = Poly::zero(n);
    for_each_subset(n, k, |subset| {
        let mut exps = vec![0; n];
        for &i in subset {
            exps[i] = power;
        }
        p.add_term(Monomial(exps), BigInt::one());
    });
    Ok(p)
}

/// `e_k(t1, ..., tn)`.
pub fn elementary_symmetric(k: usize, n: usize) -> Result<Poly, PolyError> {
    elementary_with_power(k, n, 1)
}

/// `e_k(t1^2, ..., tn^2)`, the symplectic invariant of degree `2k`.
pub fn elementary_symmetric_squares(k: usize, n: usize) -> Result<Poly, PolyError> {
    elementary_with_power(k, n, 2)
}
