//! Independent oracles. Nothing here calls into the production SNF,
//! polynomial or Weyl code paths; they work on plain integer data.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

pub type Dense = HashMap<Vec<u32>, i64>;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Determinant by permutation expansion (small matrices only).
fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    // Laplace along the first row
    let mut acc = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc += sign * m[0][j] * det(&minor);
    }
    acc
}

/// Invariant factors from the gcd-of-minors tower `d1 * ... * di = gcd(i x i minors)`.
pub fn minor_gcd_invariants(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect())
                    .collect();
                g = g.gcd(&BigInt::from(det(&minor)));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = (&a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Number of partitions of each size `0..=a*b` fitting in an `a x b` box.
pub fn box_partitions(a: usize, b: usize) -> Vec<u64> {
    let n = a * b;
    let mut counts = vec![0u64; n + 1];
    fn rec(rows_left: usize, max_part: usize, size: usize, counts: &mut [u64]) {
        counts[size] += 1;
        if rows_left == 0 {
            return;
        }
        for part in 1..=max_part {
            rec(rows_left - 1, part, size + part, counts);
        }
    }
    rec(a, b, 0, &mut counts);
    counts
}

/// All signed permutations of `n` letters as `(perm, signs)`.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, Vec<i8>)> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for p in perms {
        for mask in 0..(1u32 << n) {
            let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push((p.clone(), signs));
        }
    }
    out
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn dense_add(a: &Dense, b: &Dense, scale_b: i64) -> Dense {
    let mut out = a.clone();
    for (m, c) in b {
        *out.entry(m.clone()).or_default() += scale_b * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `e_k` of `t1^power, ..., tn^power` by subset enumeration.
pub fn dense_elementary(k: usize, n: usize, power: u32) -> Dense {
    subsets(n, k)
        .into_iter()
        .map(|s| {
            let mut m = vec![0; n];
            for i in s {
                m[i] = power;
            }
            (m, 1)
        })
        .collect()
}

pub fn dense_var(n: usize, i: usize, coeff: i64) -> Dense {
    let mut m = vec![0; n];
    m[i] = 1;
    [(m, coeff)].into_iter().collect()
}

/// Coordinates of `p` in the monomial basis `basis`.
pub fn coordinates(p: &Dense, basis: &[Vec<u32>]) -> Vec<i64> {
    basis.iter().map(|m| p.get(m).copied().unwrap_or(0)).collect()
}
