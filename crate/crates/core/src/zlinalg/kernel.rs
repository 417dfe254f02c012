//! Smith elimination, generic over the entry type so that small matrices run
//! on machine integers and fall back to big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(super) trait Entry: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn magnitude_lt(&self, other: &Self) -> bool;
    /// `self + factor * other`, `None` on overflow.
    fn mul_add(&self, factor: &Self, other: &Self) -> Option<Self>;
    /// Quotient rounded toward zero.
    fn quotient(&self, d: &Self) -> Option<Self>;
    fn negated(&self) -> Option<Self>;
    /// Whether `self` divides `other`.
    fn divides(&self, other: &Self) -> bool;
    fn magnitude(&self) -> Option<Self>;
    /// Nonnegative `(gcd, lcm)`.
    fn gcd_lcm(&self, other: &Self) -> Option<(Self, Self)>;
}

impl Entry for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn magnitude_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn mul_add(&self, factor: &Self, other: &Self) -> Option<Self> {
        factor.checked_mul(*other)?.checked_add(*self)
    }
    fn quotient(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn divides(&self, other: &Self) -> bool {
        // i64::MIN % -1 overflows, and every integer is divisible by ±1
        self.is_unit() || other % self == 0
    }
    fn magnitude(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn gcd_lcm(&self, other: &Self) -> Option<(Self, Self)> {
        let (a, b) = (self.checked_abs()?, other.checked_abs()?);
        let g = a.gcd(&b);
        if g == 0 {
            return Some((0, 0));
        }
        Some((g, (a / g).checked_mul(b)?))
    }
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn magnitude_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn mul_add(&self, factor: &Self, other: &Self) -> Option<Self> {
        Some(self + factor * other)
    }
    fn quotient(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn divides(&self, other: &Self) -> bool {
        other.is_multiple_of(self)
    }
    fn magnitude(&self) -> Option<Self> {
        Some(self.abs())
    }
    fn gcd_lcm(&self, other: &Self) -> Option<(Self, Self)> {
        let (g, l) = Integer::gcd_lcm(self, other);
        Some((g, l.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Entry> Mat<E> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![E::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = E::one();
        }
        Mat { rows: n, cols: n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    fn transpose(&self) -> Mat<E> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// At most one nonzero entry in every row and every column.
    fn is_monomial(&self) -> bool {
        let mut col_used = vec![false; self.cols];
        for row in self.data.chunks(self.cols.max(1)) {
            let mut seen = false;
            for (j, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if seen || col_used[j] {
                    return false;
                }
                seen = true;
                col_used[j] = true;
            }
        }
        true
    }

    fn row_weight(&self, i: usize, from: usize) -> usize {
        (from..self.cols).filter(|&c| !self.at(i, c).is_zero()).count()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// `row[target] += factor * row[source]` on columns `from..`.
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &E, from: usize) -> Option<()> {
        for c in from..self.cols {
            let s = &self.data[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = self.data[target * self.cols + c].mul_add(factor, s)?;
            self.data[target * self.cols + c] = v;
        }
        Some(())
    }

    /// `col[target] += factor * col[source]` on rows `from..`.
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &E, from: usize) -> Option<()> {
        for r in from..self.rows {
            let s = &self.data[r * self.cols + source];
            if s.is_zero() {
                continue;
            }
            let v = self.data[r * self.cols + target].mul_add(factor, s)?;
            self.data[r * self.cols + target] = v;
        }
        Some(())
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for c in 0..self.cols {
            let v = self.data[i * self.cols + c].negated()?;
            self.data[i * self.cols + c] = v;
        }
        Some(())
    }

    /// Smallest nonzero magnitude in the block `t.., t..`; ties go to the
    /// lowest row, then the lowest column.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.at(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.magnitude_lt(self.at(bi, bj))) {
                    best = Some((i, j));
                    if v.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }
}

pub(super) struct Reduced<E> {
    /// Positive invariant factors in divisibility order.
    pub invariants: Vec<E>,
    /// `left * A * right = diagonal`, present when certificates were requested.
    pub certificate: Option<(Mat<E>, Mat<E>, Mat<E>)>,
}

/// Invariant factors of `Z/d1 + ... + Z/dk` by pairwise gcd/lcm exchange.
fn normalize_chain<E: Entry>(mut d: Vec<E>) -> Option<Vec<E>> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i].divides(&d[j]) {
                continue;
            }
            let (g, l) = d[i].gcd_lcm(&d[j])?;
            d[i] = g;
            d[j] = l;
        }
    }
    Some(d)
}

/// Row echelon form by row operations only, column by column, pivoting on
/// the smallest nonzero magnitude within the column. Returns the number of
/// nonzero rows; the rows below are zero.
fn echelon<E: Entry>(a: &mut Mat<E>, mut left: Option<&mut Mat<E>>) -> Option<usize> {
    let mut current = 0;
    for c in 0..a.cols {
        if current == a.rows {
            break;
        }
        loop {
            // smallest magnitude, then fewest nonzeros to limit fill-in
            let mut best: Option<(usize, usize)> = None;
            for i in current..a.rows {
                let v = a.at(i, c);
                if v.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((b, weight)) => {
                        v.magnitude_lt(a.at(b, c)) || (!a.at(b, c).magnitude_lt(v) && a.row_weight(i, c) < weight)
                    }
                };
                if better {
                    best = Some((i, a.row_weight(i, c)));
                }
            }
            let Some((p, _)) = best else { break };
            a.swap_rows(current, p);
            if let Some(u) = left.as_deref_mut() {
                u.swap_rows(current, p);
            }
            let pivot = a.at(current, c).clone();
            let mut remainder = false;
            for i in current + 1..a.rows {
                if a.at(i, c).is_zero() {
                    continue;
                }
                let q = a.at(i, c).quotient(&pivot)?.negated()?;
                a.add_row_multiple(i, current, &q, c)?;
                if let Some(u) = left.as_deref_mut() {
                    u.add_row_multiple(i, current, &q, 0)?;
                }
                remainder |= !a.at(i, c).is_zero();
            }
            if !remainder {
                current += 1;
                break;
            }
        }
    }
    Some(current)
}

/// Diagonalizes `a`; `None` if an entry overflowed `E`.
///
/// Row and column echelon passes alternate until every row and column holds
/// at most one nonzero entry; the global smallest-pivot elimination then
/// only has to restore the divisibility chain.
pub(super) fn reduce<E: Entry>(mut a: Mat<E>, certificates: bool) -> Option<Reduced<E>> {
    let (mut left, mut right) = if certificates {
        (Some(Mat::identity(a.rows)), Some(Mat::identity(a.cols)))
    } else {
        (None, None)
    };
    loop {
        let nonzero = echelon(&mut a, left.as_mut())?;
        if !certificates && nonzero < a.rows {
            a.data.truncate(nonzero * a.cols);
            a.rows = nonzero;
        }
        if a.is_monomial() {
            break;
        }
        let mut at = a.transpose();
        let mut vt = right.as_ref().map(Mat::transpose);
        echelon(&mut at, vt.as_mut())?;
        a = at.transpose();
        right = vt.map(|v| v.transpose());
        if a.is_monomial() {
            break;
        }
    }
    if !certificates {
        let entries = a
            .data
            .iter()
            .filter(|v| !v.is_zero())
            .map(Entry::magnitude)
            .collect::<Option<Vec<_>>>()?;
        return Some(Reduced {
            invariants: normalize_chain(entries)?,
            certificate: None,
        });
    }
    let mut rank = 0;
    for t in 0..a.rows.min(a.cols) {
        while let Some((pi, pj)) = a.find_pivot(t) {
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some(u) = left.as_mut() {
                u.swap_rows(t, pi);
            }
            if let Some(v) = right.as_mut() {
                v.swap_cols(t, pj);
            }

            let pivot = a.at(t, t).clone();
            let mut remainder = false;
            for i in t + 1..a.rows {
                if a.at(i, t).is_zero() {
                    continue;
                }
                let q = a.at(i, t).quotient(&pivot)?.negated()?;
                a.add_row_multiple(i, t, &q, t)?;
                if let Some(u) = left.as_mut() {
                    u.add_row_multiple(i, t, &q, 0)?;
                }
                remainder |= !a.at(i, t).is_zero();
            }
            for j in t + 1..a.cols {
                if a.at(t, j).is_zero() {
                    continue;
                }
                let q = a.at(t, j).quotient(&pivot)?.negated()?;
                a.add_col_multiple(j, t, &q, t)?;
                if let Some(v) = right.as_mut() {
                    v.add_col_multiple(j, t, &q, 0)?;
                }
                remainder |= !a.at(t, j).is_zero();
            }
            if remainder {
                continue;
            }

            if pivot.is_unit() {
                break;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !pivot.divides(a.at(i, j))));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &E::one(), t)?;
                    if let Some(u) = left.as_mut() {
                        u.add_row_multiple(t, i, &E::one(), 0)?;
                    }
                }
                None => break,
            }
        }
        if a.at(t, t).is_zero() {
            break;
        }
        if a.at(t, t).is_negative() {
            a.negate_row(t)?;
            if let Some(u) = left.as_mut() {
                u.negate_row(t)?;
            }
        }
        rank = t + 1;
    }
    let invariants = (0..rank).map(|i| a.at(i, i).clone()).collect();
    Some(Reduced {
        invariants,
        certificate: Some((left?, a, right?)),
    })
}
