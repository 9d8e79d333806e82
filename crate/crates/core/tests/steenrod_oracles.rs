use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sseqbench_core::graded::{Generator, Monomial, PolyAlgebraSpec, Polynomial};
use sseqbench_core::steenrod::{self, SteenrodAction, SteenrodTable, Unlisted};

/// Pascal's triangle mod 2, rows `0..=n`.
fn pascal(n: usize) -> Vec<Vec<bool>> {
    let mut rows = vec![vec![true]];
    for r in 1..=n {
        let prev = &rows[r - 1];
        let row = (0..=r).map(|k| (k > 0 && prev[k - 1]) ^ (k < r && prev[k])).collect();
        rows.push(row);
    }
    rows
}

/// Lucas: `C(n, i)` is odd iff the bits of `i` are a subset of those of `n`.
fn lucas(n: u32, i: u32) -> bool {
    i & n == i
}

fn one_variable() -> SteenrodAction {
    let a = PolyAlgebraSpec::new(vec![Generator::new("t", 1)]).unwrap();
    SteenrodTable::forced(a).validate().unwrap()
}

fn t_pow(n: u32) -> Polynomial {
    Polynomial::from_monomial(Monomial::from_exponents(vec![n]))
}

#[test]
fn lucas_agrees_with_pascal() {
    let p = pascal(64);
    for n in 0..=64u32 {
        for i in 0..=n {
            assert_eq!(lucas(n, i), p[n as usize][i as usize], "C({n},{i})");
        }
    }
}

#[test]
fn one_variable_squares_are_binomial() {
    let a = one_variable();
    for n in 0..=32u32 {
        for i in 0..=32 - n {
            let expected = if lucas(n, i) { t_pow(n + i) } else { Polynomial::zero() };
            assert_eq!(a.sq(i, &t_pow(n)), expected, "Sq^{i}(t^{n})");
        }
    }
}

/// Degree `d` of `F_2[t]` is hit iff some `Sq^i t^{d-i}`, `0 < i ≤ d - i`,
/// has odd coefficient; coefficients from Pascal's triangle.
#[test]
fn one_variable_hit_matches_brute_force() {
    let p = pascal(32);
    let brute: Vec<u32> = (0..=31u32)
        .filter(|&d| !(1..=d).any(|i| 2 * i <= d && p[(d - i) as usize][i as usize]))
        .collect();
    assert_eq!(brute, [0, 1, 3, 7, 15, 31]);
    let report = steenrod::hit_quotient(&one_variable(), 31);
    assert_eq!(report.non_hit_degrees(), brute);
    for row in &report.rows {
        assert_eq!(row.hit + row.quotient, row.total);
    }
}

/// A valid table on `F_2[x4, x6, x7]` with random unforced entries.
fn random_bg2_table(seed: u64) -> SteenrodAction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = PolyAlgebraSpec::bg2();
    let mut t = SteenrodTable::forced(a.clone()).with_unlisted(Unlisted::Error);
    for g in a.generators() {
        for i in 1..g.degree {
            let terms = a.basis_in_degree(g.degree + i).into_iter().filter(|_| rng.gen_bool(0.5));
            t.set(&g.name, i, Polynomial::from_terms(terms)).unwrap();
        }
    }
    t.validate().unwrap()
}

/// `Sq^i` by the Cartan formula, splitting off one generator at a time from
/// the end of the exponent vector.
fn cartan_peel(action: &SteenrodAction, i: u32, m: &Monomial) -> Polynomial {
    let exps = m.exponents();
    let Some(g) = exps.iter().rposition(|&e| e > 0) else {
        return if i == 0 { Polynomial::from_monomial(m.clone()) } else { Polynomial::zero() };
    };
    let mut rest = exps.to_vec();
    rest[g] -= 1;
    let rest = Monomial::from_exponents(rest);
    if rest.is_unit() {
        return action.on_generator(g, i);
    }
    let mut out = Polynomial::zero();
    for a in 0..=i {
        out.add_assign(&action.on_generator(g, a).mul(&cartan_peel(action, i - a, &rest)));
    }
    out
}

/// `Sq^i` by splitting each exponent in half, a different factorization tree.
fn cartan_halve(action: &SteenrodAction, i: u32, m: &Monomial) -> Polynomial {
    let exps = m.exponents();
    let total: u32 = exps.iter().sum();
    if total <= 1 {
        return cartan_peel(action, i, m);
    }
    let left: Vec<u32> = exps.iter().map(|e| e / 2).collect();
    let (left, right): (Vec<u32>, Vec<u32>) = if left.iter().all(|&e| e == 0) {
        let g = exps.iter().position(|&e| e > 0).unwrap();
        let mut l = vec![0; exps.len()];
        l[g] = 1;
        let r = exps.iter().zip(&l).map(|(e, l)| e - l).collect();
        (l, r)
    } else {
        let r = exps.iter().zip(&left).map(|(e, l)| e - l).collect();
        (left, r)
    };
    let (l, r) = (Monomial::from_exponents(left), Monomial::from_exponents(right));
    let mut out = Polynomial::zero();
    for a in 0..=i {
        out.add_assign(&cartan_halve(action, a, &l).mul(&cartan_halve(action, i - a, &r)));
    }
    out
}

#[test]
fn squaring_axiom_on_all_monomials_through_degree_twelve() {
    let a = PolyAlgebraSpec::bg2();
    for seed in 0..4 {
        let action = random_bg2_table(seed);
        for d in 0..=12 {
            for m in a.basis_in_degree(d) {
                let p = Polynomial::from_monomial(m.clone());
                assert_eq!(action.sq(d, &p), p.square());
                assert_eq!(action.sq(0, &p), p);
                assert!(action.sq(d + 1, &p).is_zero());
            }
        }
    }
}

#[test]
fn trivial_action_hits_the_square() {
    let a = PolyAlgebraSpec::new(vec![Generator::new("g", 4)]).unwrap();
    let report = steenrod::hit_quotient(&SteenrodTable::trivial(a).validate().unwrap(), 12);
    // Sq^4(g^2) = 2 g^3 = 0, so g^3 stays unhit; the pattern is that of
    // F_2[t] with degrees scaled by 4.
    let non_hit: BTreeSet<u32> = report.non_hit_degrees().into_iter().collect();
    assert_eq!(non_hit, BTreeSet::from([0, 4, 12]));
}

fn homogeneous(a: &PolyAlgebraSpec, d: u32, pick: u64) -> Polynomial {
    Polynomial::from_terms(a.basis_in_degree(d).into_iter().enumerate().filter(|(j, _)| pick >> (j % 64) & 1 == 1).map(|(_, m)| m))
}

proptest! {
    #[test]
    fn factorization_independence(seed in 0u64..16, d in 0u32..=16, j in any::<usize>(), i in 0u32..=16) {
        let a = PolyAlgebraSpec::bg2();
        let basis = a.basis_in_degree(d);
        prop_assume!(!basis.is_empty());
        let m = &basis[j % basis.len()];
        let action = random_bg2_table(seed);
        let engine = action.sq_monomial(i, m);
        prop_assert_eq!(&engine, &cartan_peel(&action, i, m));
        prop_assert_eq!(&engine, &cartan_halve(&action, i, m));
    }

    #[test]
    fn cartan_on_products(seed in 0u64..16, dp in 0u32..=12, pp in any::<u64>(), pq in any::<u64>(), i in 0u32..=12) {
        let a = PolyAlgebraSpec::bg2();
        let dq = 12 - dp;
        let (p, q) = (homogeneous(&a, dp, pp), homogeneous(&a, dq, pq));
        let action = random_bg2_table(seed);
        let mut rhs = Polynomial::zero();
        for k in 0..=i {
            rhs.add_assign(&action.sq(k, &p).mul(&action.sq(i - k, &q)));
        }
        prop_assert_eq!(action.sq(i, &p.mul(&q)), rhs);
    }

    #[test]
    fn hit_accounting(seed in 0u64..32) {
        let report = steenrod::hit_quotient(&random_bg2_table(seed), 24);
        for row in &report.rows {
            prop_assert_eq!(row.hit + row.quotient, row.total);
            prop_assert_eq!(row.representatives.len(), row.quotient);
        }
        // Only Sq^4(1) = 0 could reach x4.
        prop_assert_eq!(report.rows[4].quotient, 1);
    }
}
