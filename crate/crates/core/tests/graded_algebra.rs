use proptest::prelude::*;
use sseqbench_core::graded::{Generator, Monomial, PolyAlgebraSpec, Polynomial};

/// Coefficients of `Π 1/(1 - t^d)` up to `t^n`, by repeated series division.
fn series_oracle(degrees: &[u32], n: usize) -> Vec<usize> {
    let mut c = vec![0usize; n + 1];
    c[0] = 1;
    for &d in degrees {
        let d = d as usize;
        for i in d..=n {
            c[i] += c[i - d];
        }
    }
    c
}

fn algebra(degrees: &[u32]) -> PolyAlgebraSpec {
    PolyAlgebraSpec::new(degrees.iter().enumerate().map(|(i, &d)| Generator::new(format!("y{i}"), d)).collect()).unwrap()
}

fn polynomial(arity: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(prop::collection::vec(0u32..3, arity), 0..5)
        .prop_map(|ms| Polynomial::from_terms(ms.into_iter().map(Monomial::from_exponents)))
}

#[test]
fn bg2_vanishing_degrees() {
    let a = PolyAlgebraSpec::bg2();
    let empty: Vec<u32> = (1..=10).filter(|&d| a.basis_in_degree(d).is_empty()).collect();
    assert_eq!(empty, [1, 2, 3, 5, 9]);
}

#[test]
fn basis_is_lex_sorted_and_homogeneous() {
    let a = PolyAlgebraSpec::bg2();
    for d in 0..=30 {
        let basis = a.basis_in_degree(d);
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
        assert!(basis.iter().all(|m| a.degree(m) == d));
    }
}

proptest! {
    #[test]
    fn poincare_matches_series(degrees in prop::collection::vec(1u32..8, 0..4), n in 0u32..30) {
        let a = algebra(&degrees);
        prop_assert_eq!(a.poincare_dims(n), series_oracle(&degrees, n as usize));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(p in polynomial(3), q in polynomial(3), r in polynomial(3)) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
    }

    #[test]
    fn degrees_add(i in 0usize..6, j in 0usize..6, di in 0u32..=12, dj in 0u32..=12) {
        let a = PolyAlgebraSpec::bg2();
        let bi = a.basis_in_degree(di);
        let bj = a.basis_in_degree(dj);
        let p = Polynomial::from_terms(bi.iter().take(i + 1).cloned());
        let q = Polynomial::from_terms(bj.iter().take(j + 1).cloned());
        for m in a.multiply(&p, &q).terms() {
            prop_assert_eq!(a.degree(m), di + dj);
        }
    }

    #[test]
    fn squaring_is_frobenius(p in polynomial(3)) {
        let doubled = Polynomial::from_terms(p.terms().map(|m| m.pow(2)));
        prop_assert_eq!(p.square(), doubled);
    }
}
