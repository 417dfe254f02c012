//! Exact integer linear algebra: Smith normal form, cokernels, ranks and the
//! graded abelian groups built from them.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use kernel::Mat;

mod kernel;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest row or column count accepted by [`smith_normal_form`].
pub const DEFAULT_MATRIX_CAP: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix of size {rows}x{cols} exceeds the cap of {cap}")]
    MatrixTooLarge { rows: usize, cols: usize, cap: usize },
    #[error("relation matrix has {got} columns, ambient lattice has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix with `cols` columns from row vectors.
    pub fn from_row_vectors(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length differs from column count");
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant by cofactor-free Bareiss elimination; square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Unimodular `left`, `right` with `left * A * right` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d1 | d2 | ... | dk`.
    pub invariants: Vec<BigUint>,
    pub certificate: Option<Certificate>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmithOptions {
    pub certificates: bool,
    pub matrix_cap: usize,
}

impl Default for SmithOptions {
    fn default() -> Self {
        SmithOptions {
            certificates: false,
            matrix_cap: DEFAULT_MATRIX_CAP,
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm, LinalgError> {
    smith_with(m, SmithOptions::default())
}

pub fn smith_normal_form_with_certificates(m: &IntMatrix) -> Result<SmithForm, LinalgError> {
    smith_with(
        m,
        SmithOptions {
            certificates: true,
            ..SmithOptions::default()
        },
    )
}

fn to_machine(m: &IntMatrix) -> Option<Mat<i64>> {
    let data = m.data.iter().map(|v| v.to_i64()).collect::<Option<Vec<_>>>()?;
    Some(Mat {
        rows: m.rows,
        cols: m.cols,
        data,
    })
}

fn to_big(m: Mat<i64>) -> IntMatrix {
    IntMatrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data.into_iter().map(BigInt::from).collect(),
    }
}

fn into_int(m: Mat<BigInt>) -> IntMatrix {
    IntMatrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data,
    }
}

/// Smith normal form with explicit options. Runs on `i64` entries when they
/// fit and restarts on big integers if any intermediate value overflows.
pub fn smith_with(m: &IntMatrix, opts: SmithOptions) -> Result<SmithForm, LinalgError> {
    if m.rows > opts.matrix_cap || m.cols > opts.matrix_cap {
        return Err(LinalgError::MatrixTooLarge {
            rows: m.rows,
            cols: m.cols,
            cap: opts.matrix_cap,
        });
    }
    let fast = to_machine(m).and_then(|a| kernel::reduce(a, opts.certificates));
    let (invariants, certificate) = match fast {
        Some(r) => (
            r.invariants.into_iter().map(|v| BigUint::from(v as u64)).collect(),
            r.certificate.map(|(l, d, r)| (to_big(l), to_big(d), to_big(r))),
        ),
        None => {
            let a = Mat {
                rows: m.rows,
                cols: m.cols,
                data: m.data.clone(),
            };
            let r = kernel::reduce(a, opts.certificates).expect("big integers do not overflow");
            (
                r.invariants.into_iter().map(|v| v.magnitude().clone()).collect(),
                r.certificate.map(|(l, d, r)| (into_int(l), into_int(d), into_int(r))),
            )
        }
    };
    let certificate = certificate.map(|(left, diagonal, right)| Certificate {
        left,
        right,
        diagonal,
    });
    Ok(SmithForm {
        invariants,
        certificate,
    })
}

/// Rank over the rationals.
pub fn rational_rank(m: &IntMatrix) -> Result<usize, LinalgError> {
    Ok(smith_normal_form(m)?.rank())
}

/// Structure of `Z^ambient / rowspan(m)`.
pub fn cokernel(m: &IntMatrix, ambient_rank: usize) -> Result<AbelianGroup, LinalgError> {
    cokernel_with(m, ambient_rank, SmithOptions::default())
}

pub fn cokernel_with(m: &IntMatrix, ambient_rank: usize, opts: SmithOptions) -> Result<AbelianGroup, LinalgError> {
    if m.cols != ambient_rank {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient_rank,
            got: m.cols,
        });
    }
    let snf = smith_with(m, opts)?;
    Ok(AbelianGroup {
        free_rank: ambient_rank - snf.rank(),
        torsion: snf.invariants.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

/// Invariant factor chain of `Z/a1 + ... + Z/ak`; orders 0 and 1 are dropped.
pub fn invariant_factors(orders: &[BigUint]) -> Vec<BigUint> {
    let nonzero: Vec<&BigUint> = orders.iter().filter(|d| !d.is_zero()).collect();
    let mut diag = IntMatrix::zeros(nonzero.len(), nonzero.len());
    for (i, d) in nonzero.iter().enumerate() {
        diag[(i, i)] = BigInt::from_biguint(Sign::Plus, (*d).clone());
    }
    let snf = smith_with(
        &diag,
        SmithOptions {
            certificates: false,
            matrix_cap: usize::MAX,
        },
    )
    .expect("uncapped");
    snf.invariants.into_iter().filter(|d| !d.is_one()).collect()
}

/// A finitely generated abelian group `Z^free_rank + Z/d1 + ... + Z/dk`
/// with `d1 | ... | dk` and every `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serde_util::biguint_seq")]
    pub torsion: Vec<BigUint>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, torsion: &[u64]) -> Self {
        AbelianGroup {
            free_rank,
            torsion: torsion.iter().map(|&d| BigUint::from(d)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Drops every `p`-primary part of the torsion (tensor with `Z[1/p]`).
    pub fn localize_away(&self, p: u64) -> AbelianGroup {
        let p = BigUint::from(p);
        let stripped: Vec<BigUint> = self
            .torsion
            .iter()
            .map(|d| {
                let mut d = d.clone();
                while (&d % &p).is_zero() {
                    d /= &p;
                }
                d
            })
            .collect();
        AbelianGroup {
            free_rank: self.free_rank,
            torsion: invariant_factors(&stripped),
        }
    }

    /// The chain is divisibility-ordered with all entries at least 2.
    pub fn is_normalized(&self) -> bool {
        let two = BigUint::from(2u32);
        self.torsion.iter().all(|d| d >= &two) && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianGroup {
    /// `Z^2 + Z/2 + Z/8`, or `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Abelian groups indexed by degree `0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedAbelianGroup {
    degrees: Vec<AbelianGroup>,
}

#[derive(Serialize, Deserialize)]
struct DegreeEntry {
    degree: usize,
    free_rank: usize,
    #[serde(with = "crate::serde_util::biguint_seq")]
    torsion: Vec<BigUint>,
}

impl GradedAbelianGroup {
    pub fn new(degrees: Vec<AbelianGroup>) -> Self {
        GradedAbelianGroup { degrees }
    }

    pub fn degree(&self, d: usize) -> Option<&AbelianGroup> {
        self.degrees.get(d)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.degrees.len().checked_sub(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &AbelianGroup)> {
        self.degrees.iter().enumerate()
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn free_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|g| g.free_rank).collect()
    }

    pub fn truncate(&self, max_degree: usize) -> GradedAbelianGroup {
        GradedAbelianGroup {
            degrees: self.degrees.iter().take(max_degree + 1).cloned().collect(),
        }
    }

    pub fn localize_away(&self, p: u64) -> GradedAbelianGroup {
        GradedAbelianGroup {
            degrees: self.degrees.iter().map(|g| g.localize_away(p)).collect(),
        }
    }
}

impl Serialize for GradedAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.degrees.len()))?;
        for (degree, g) in self.iter() {
            seq.serialize_element(&DegreeEntry {
                degree,
                free_rank: g.free_rank,
                torsion: g.torsion.clone(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for GradedAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<DegreeEntry>::deserialize(d)?;
        let mut degrees = Vec::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            if e.degree != i {
                return Err(serde::de::Error::custom(format!(
                    "degrees must be contiguous from 0, found {} at position {i}",
                    e.degree
                )));
            }
            degrees.push(AbelianGroup {
                free_rank: e.free_rank,
                torsion: e.torsion,
            });
        }
        Ok(GradedAbelianGroup { degrees })
    }
}
