mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use zipchow::*;

use common::*;

fn to_dense(p: &Poly) -> Dense {
    p.terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.to_i64().unwrap()))
        .collect()
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..4, nvars), -6i64..=6), 0..6).prop_map(move |terms| {
        Poly::from_terms(
            nvars,
            terms.into_iter().map(|(e, c)| (Monomial::new(e), BigInt::from(c))),
        )
    })
}

fn compositions(h: usize) -> Vec<Vec<usize>> {
    if h == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=h {
        for mut rest in compositions(h - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every parabolic of rank at most `max_rank` (symplectic ones capped at `max_sp`).
fn parabolics(max_rank: usize, max_sp: usize) -> Vec<Parabolic> {
    let mut out = Vec::new();
    for h in 1..=max_rank {
        for c in compositions(h) {
            out.push(Parabolic::gl(&c).unwrap());
        }
    }
    for n in 1..=max_sp.min(max_rank) {
        out.push(Parabolic::sp_borel(n).unwrap());
        out.push(Parabolic::sp_siegel(n).unwrap());
    }
    out
}

fn is_symplectic(par: &Parabolic) -> bool {
    matches!(par.group(), GroupSpec::Sp { .. })
}

/// Sorted prime-power decomposition of `Z/n1 + Z/n2 + ...`.
fn elementary_divisors(orders: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for &n in orders {
        let mut n = n;
        let mut p = 2;
        while n > 1 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            if pk > 1 {
                out.push(pk);
            }
            p += 1;
        }
    }
    out.sort_unstable();
    out
}

fn group_elementary_divisors(g: &AbelianGroup) -> Vec<u64> {
    let orders: Vec<u64> = g.torsion.iter().map(|t| t.to_u64().unwrap()).collect();
    elementary_divisors(&orders)
}

fn all_monomials(n: usize, degree: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in 0..=degree {
        for mut rest in all_monomials(n - 1, degree - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---------- polynomials ----------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in poly_strategy(3), b in poly_strategy(3), c in poly_strategy(3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(3), a.clone());
    }

    #[test]
    fn product_matches_dense_oracle(a in poly_strategy(3), b in poly_strategy(3)) {
        prop_assert_eq!(to_dense(&(&a * &b)), dense_mul(&to_dense(&a), &to_dense(&b)));
    }

    #[test]
    fn text_round_trip(a in poly_strategy(3)) {
        prop_assert_eq!(Poly::parse(&a.to_string(), 3).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn twist_is_ring_endomorphism(a in poly_strategy(3), b in poly_strategy(3), q in 1u64..10) {
        let tw = |p: &Poly| p.frobenius_twist(q).unwrap();
        prop_assert_eq!(tw(&(&a * &b)), &tw(&a) * &tw(&b));
        prop_assert_eq!(tw(&(&a + &b)), &tw(&a) + &tw(&b));
        prop_assert_eq!(tw(&Poly::one(3)), Poly::one(3));
    }

    #[test]
    fn twist_composes(a in poly_strategy(3), q in 1u64..6, r in 1u64..6) {
        prop_assert_eq!(a.frobenius_twist(1).unwrap(), a.clone());
        let twice = a.frobenius_twist(q).unwrap().frobenius_twist(r).unwrap();
        prop_assert_eq!(twice, a.frobenius_twist(q * r).unwrap());
    }

    #[test]
    fn twist_scales_homogeneous_parts(a in poly_strategy(3), q in 1u64..6) {
        let twisted = a.frobenius_twist(q).unwrap();
        for (m, c) in a.terms() {
            let expected = c * BigInt::from(q).pow(m.degree());
            prop_assert_eq!(twisted.coefficient(m), expected);
        }
    }
}

#[test]
fn elementary_symmetric_matches_subsets() {
    for n in 1..=6 {
        for k in 0..=n {
            let e = elementary_symmetric(k, n).unwrap();
            assert_eq!(e.num_terms() as u64, binomial(n as u64, k as u64));
            assert_eq!(to_dense(&e), dense_elementary(k, n, 1));
            let e2 = elementary_symmetric_squares(k, n).unwrap();
            assert_eq!(to_dense(&e2), dense_elementary(k, n, 2));
        }
    }
}

#[test]
fn squares_satisfy_newton_type_identity() {
    // (-1)^k e_k(t^2) = sum_{i+j=2k} (-1)^i e_i e_j
    for n in 1..=4 {
        for k in 1..=n {
            let mut rhs = Dense::new();
            for i in 0..=2 * k {
                let j = 2 * k - i;
                if i > n || j > n {
                    continue;
                }
                let term = dense_mul(&dense_elementary(i, n, 1), &dense_elementary(j, n, 1));
                rhs = dense_add(&rhs, &term, if i % 2 == 0 { 1 } else { -1 });
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let lhs = dense_add(&Dense::new(), &to_dense(&elementary_symmetric_squares(k, n).unwrap()), sign);
            assert_eq!(lhs, rhs, "n = {n}, k = {k}");
        }
    }
}

// ---------- Weyl groups ----------

#[test]
fn invariant_basis_size_matches_enumeration() {
    for par in parabolics(4, 4) {
        for d in 0..=10 {
            let basis = par.invariant_basis(d);
            assert_eq!(basis.len() as u64, par.invariant_basis_size(d), "{par} degree {d}");
            // orbit count by brute force: sort exponents inside each block
            let mut seen = BTreeSet::new();
            for mut m in all_monomials(par.rank(), d) {
                for b in par.blocks() {
                    m[b].sort_unstable();
                }
                seen.insert(m);
            }
            assert_eq!(basis.len(), seen.len(), "{par} degree {d}");
        }
    }
}

#[test]
fn invariant_basis_is_levi_invariant() {
    for par in parabolics(4, 4) {
        let gens = par.levi_generators();
        for d in 0..=8 {
            for b in par.invariant_basis(d) {
                for g in &gens {
                    assert_eq!(g.apply(&b), b, "{par} degree {d}");
                }
            }
        }
    }
}

#[test]
fn group_generators_are_weyl_invariant() {
    let groups = (1..=5)
        .map(|h| GroupSpec::Gl { h })
        .chain((1..=4).map(|n| GroupSpec::Sp { n }));
    for g in groups {
        let gens = g.weyl_generators();
        for (f, e) in invariant_generators(&g) {
            assert_eq!(f.degree(), Some(e));
            for w in &gens {
                assert_eq!(w.apply(&f), f, "{g:?}");
            }
        }
    }
}

/// `|W_L \ W_G|` by orbiting a generic point and forgetting the order inside Levi blocks.
fn coset_count_oracle(par: &Parabolic) -> usize {
    let n = par.rank();
    let signed = is_symplectic(par);
    let point: Vec<i64> = (1..=n as i64).collect();
    let mut seen = BTreeSet::new();
    for (perm, signs) in signed_permutations(n) {
        if !signed && signs.iter().any(|&s| s < 0) {
            continue;
        }
        let mut image: Vec<i64> = (0..n).map(|i| point[perm[i]] * signs[i] as i64).collect();
        for b in par.blocks() {
            image[b].sort_unstable();
        }
        seen.insert(image);
    }
    seen.len()
}

#[test]
fn rank_series_properties() {
    for par in parabolics(5, 4) {
        let series = par.rational_rank_series().unwrap();
        let total: u64 = series.iter().sum();
        assert_eq!(BigUint::from(total), par.coset_count(), "{par}");
        assert_eq!(total as usize, coset_count_oracle(&par), "{par}");
        assert_eq!(series.len() as u32 - 1, par.top_degree_bound(), "{par}");
        let reversed: Vec<u64> = series.iter().rev().copied().collect();
        assert_eq!(series, reversed, "{par} palindromic");
        assert_eq!(series[0], 1);
    }
}

#[test]
fn grassmannian_series_counts_box_partitions() {
    for h in 1..=6 {
        for d in 0..=h {
            let series = Parabolic::display(h, d).unwrap().rational_rank_series().unwrap();
            assert_eq!(series, box_partitions(d, h - d), "h = {h}, d = {d}");
        }
    }
}

#[test]
fn small_symplectic_coset_counts() {
    assert_eq!(coset_count_oracle(&Parabolic::sp_borel(2).unwrap()), 8);
    assert_eq!(coset_count_oracle(&Parabolic::sp_siegel(2).unwrap()), 4);
    assert_eq!(Parabolic::sp_borel(2).unwrap().coset_count(), BigUint::from(8u32));
    assert_eq!(Parabolic::sp_siegel(2).unwrap().coset_count(), BigUint::from(4u32));
}

// ---------- integer linear algebra ----------

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_certificates(rows in matrix_strategy()) {
        let a = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form_with_certificates(&a).unwrap();
        let cert = snf.certificate.as_ref().unwrap();
        prop_assert_eq!(cert.left.mul(&a).mul(&cert.right), cert.diagonal.clone());
        prop_assert_eq!(cert.left.determinant().abs(), BigInt::one());
        prop_assert_eq!(cert.right.determinant().abs(), BigInt::one());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let expected = if i == j && i < snf.rank() {
                    BigInt::from(snf.invariants[i].clone())
                } else {
                    BigInt::zero()
                };
                prop_assert_eq!(&cert.diagonal[(i, j)], &expected);
            }
        }
        for w in snf.invariants.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let oracle: Vec<BigUint> = minor_gcd_invariants(&rows)
            .into_iter()
            .map(|g| g.abs().to_biguint().unwrap())
            .collect();
        prop_assert_eq!(&snf.invariants, &oracle);
        prop_assert_eq!(smith_normal_form(&a).unwrap().invariants, oracle);
    }

    #[test]
    fn rank_matches_bareiss(rows in matrix_strategy()) {
        prop_assert_eq!(rational_rank(&IntMatrix::from_rows(&rows)).unwrap(), bareiss_rank(&rows));
    }

    #[test]
    fn cokernel_invariant_under_row_operations(
        rows in matrix_strategy(),
        ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..8),
    ) {
        let cols = rows[0].len();
        let before = cokernel(&IntMatrix::from_rows(&rows), cols).unwrap();
        let mut moved = rows.clone();
        let n = moved.len();
        for (i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                moved[i].iter_mut().for_each(|v| *v = -*v);
            } else {
                let src = moved[j].clone();
                moved[i].iter_mut().zip(&src).for_each(|(v, s)| *v += c * s);
                moved.swap(i, j);
            }
        }
        prop_assert_eq!(cokernel(&IntMatrix::from_rows(&moved), cols).unwrap(), before.clone());
        let transposed: Vec<Vec<i64>> = (0..cols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let t = cokernel(&IntMatrix::from_rows(&transposed), rows.len()).unwrap();
        prop_assert_eq!(t.torsion, before.torsion);
    }
}

// ---------- Chow rings ----------

fn chow_data() -> Vec<ZipDatum> {
    let mut out = Vec::new();
    for par in parabolics(4, 3) {
        for q in [2, 3] {
            out.push(ZipDatum::new(par.clone(), q, Some(q)).unwrap());
        }
    }
    out
}

#[test]
fn free_ranks_follow_rank_series() {
    for z in chow_data() {
        let par = z.parabolic();
        let top = par.top_degree_bound();
        let series = par.rational_rank_series().unwrap();
        let graded = graded_chow(&z, top + 3).unwrap();
        for (d, g) in graded.iter() {
            let expected = series.get(d).copied().unwrap_or(0) as usize;
            assert_eq!(g.free_rank, expected, "{par} q = {} degree {d}", z.q());
            assert!(g.is_normalized());
        }
        assert_eq!(graded.degree(0), Some(&AbelianGroup::free(1)));
        assert_eq!(BigUint::from(q_dimension(&z).unwrap()), par.coset_count());
    }
}

#[test]
fn full_levi_quotient_matches_cyclic_oracle() {
    // Z[c_1..c_h] / ((q^e - 1) c_e): each monomial spans a cyclic summand
    // of order gcd(q^e - 1) over the generators it involves.
    for h in 1..=3usize {
        for q in [2u64, 3] {
            let z = ZipDatum::new(Parabolic::gl(&[h]).unwrap(), q, Some(q)).unwrap();
            let graded = graded_chow(&z, 6).unwrap();
            for k in 1..=6u32 {
                let mut orders = Vec::new();
                for a in (1..=k).flat_map(|s| all_monomials(h, s)) {
                    // a[e-1] = exponent of c_e; weighted degree must be k
                    let weighted: u32 = a.iter().enumerate().map(|(i, &x)| (i as u32 + 1) * x).sum();
                    if weighted != k {
                        continue;
                    }
                    let g = a
                        .iter()
                        .enumerate()
                        .filter(|&(_, &x)| x > 0)
                        .map(|(i, _)| q.pow(i as u32 + 1) - 1)
                        .fold(0, num_integer::gcd);
                    orders.push(g);
                }
                let g = graded.degree(k as usize).unwrap();
                assert_eq!(g.free_rank, 0);
                assert_eq!(group_elementary_divisors(g), elementary_divisors(&orders), "h = {h} q = {q} k = {k}");
                if orders.iter().any(|&o| o > 1) {
                    assert!(!g.torsion.is_empty());
                }
            }
        }
    }
}

#[test]
fn localization_properties() {
    for z in chow_data().into_iter().take(12) {
        let graded = graded_chow(&z, 4).unwrap();
        for p in [2, 3, 5] {
            let once = localize(&graded, p).unwrap();
            let twice = localize(&once.graded, p).unwrap();
            assert_eq!(once, twice);
            let pic = picard(&z).unwrap().localize_away(p);
            assert_eq!(once.graded.degree(1), Some(&pic));
            for (_, g) in once.graded.iter() {
                assert!(g.torsion.iter().all(|t| !(t % BigUint::from(p)).is_zero()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_ignores_relation_order_and_sign(
        idx in 0usize..16,
        seed in prop::collection::vec(any::<bool>(), 8),
        rot in 0usize..8,
    ) {
        let data = chow_data();
        let z = &data[idx % data.len()];
        let rels = relations(z);
        let base = graded_chow(z, 5).unwrap();
        let mut shuffled: Vec<Poly> = rels
            .iter()
            .zip(seed.iter().cycle())
            .map(|(r, &neg)| if neg { -r } else { r.clone() })
            .collect();
        let len = shuffled.len();
        if len > 0 {
            shuffled.rotate_left(rot % len);
        }
        shuffled.reverse();
        let again = graded_quotient(z.parabolic(), &shuffled, 5, &ChowOptions::default()).unwrap();
        prop_assert_eq!(again, base);
    }
}

#[test]
fn two_step_fzip_types_match_display_data() {
    for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
        for p in [2, 3, 5] {
            let tau = FzipType::new([(0, a), (1, b)]).unwrap();
            let r = fzip_report(&tau, p, 4).unwrap();
            let z = ZipDatum::display(a + b, b, p).unwrap();
            assert_eq!(r.graded, graded_chow(&z, 4).unwrap());
            assert_eq!(r.picard, picard(&z).unwrap());
            assert_eq!(r.rational_dimension, Some(binomial((a + b) as u64, b as u64)));
        }
    }
}

#[test]
fn reports_round_trip_through_json() {
    let data = [
        ZipDatum::display(3, 1, 2).unwrap(),
        ZipDatum::new(Parabolic::sp_siegel(2).unwrap(), 3, Some(3)).unwrap(),
        ZipDatum::new(Parabolic::gl(&[1, 2, 1]).unwrap(), 4, Some(2)).unwrap(),
    ];
    for z in data {
        let r = report(&z, 3).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: ChowReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
    let bt = bt_report(3, 1, 2, 5, 3).unwrap();
    let back: BtReport = serde_json::from_str(&serde_json::to_string(&bt).unwrap()).unwrap();
    assert_eq!(back, bt);
}

#[test]
fn display_picard_torsion() {
    // Pic of a display datum has torsion exactly Z/(p-1) for 0 < d < h
    let mut counts = BTreeMap::new();
    for h in 2..=4 {
        for d in 1..h {
            for p in [2u64, 3, 5, 7] {
                let pic = picard(&ZipDatum::display(h, d, p).unwrap()).unwrap();
                assert_eq!(pic.free_rank, 1);
                let expected: Vec<u64> = if p > 2 { vec![p - 1] } else { vec![] };
                assert_eq!(group_elementary_divisors(&pic), elementary_divisors(&expected));
                *counts.entry(p).or_insert(0) += 1;
            }
        }
    }
    assert_eq!(counts.len(), 4);
}
