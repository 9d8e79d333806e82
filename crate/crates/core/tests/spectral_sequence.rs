use proptest::prelude::*;
use sseqbench_core::f2;
use sseqbench_core::graded::{Generator, Monomial, PolyAlgebraSpec, Polynomial};
use sseqbench_core::specseq::{
    self, Bidegree, Coefficient, DifferentialAssignment, FibrationSpec, FibreGenerator, ImageTerm, SpectralSequence,
    SymbolicImage,
};

fn g2(epsilon: bool) -> (FibrationSpec, DifferentialAssignment) {
    (FibrationSpec::g2(), DifferentialAssignment::g2_template().with_value("epsilon", epsilon))
}

/// `dim E_{r+1} = dim E_r - rank(d_r out) - rank(d_r in)` at every bidegree.
fn check_rank_accounting(seq: &SpectralSequence) {
    for pair in seq.pages().windows(2) {
        let (p, q) = (&pair[0], &pair[1]);
        for b in p.e2_basis().bidegrees() {
            let out = p.differential(b).map_or(0, f2::rank);
            let incoming = b.d_source(p.r()).and_then(|s| p.differential(s)).map_or(0, f2::rank);
            assert_eq!(q.dim(b), p.dim(b) - out - incoming, "at {b} on page {}", p.r());
        }
        p.check_composition().unwrap();
    }
}

#[test]
fn g2_rank_accounting() {
    for eps in [false, true] {
        let (spec, a) = g2(eps);
        check_rank_accounting(&SpectralSequence::compute(&spec, &a).unwrap());
    }
}

#[test]
fn base_row_survives_without_epsilon() {
    let (spec, a) = g2(false);
    let (einfty, _) = specseq::run_to_einfty(&spec, &a).unwrap();
    let base = spec.base();
    for s in 0..=10 {
        assert_eq!(einfty.dim(Bidegree::new(s, 0)), base.basis_in_degree(s).len());
    }
}

#[test]
fn nontrivial_branch_survivors() {
    let (spec, a) = g2(true);
    let (_, summary) = specseq::run_to_einfty(&spec, &a).unwrap();
    let survivors: Vec<String> = summary.survivors.values().flatten().cloned().collect();
    assert_eq!(survivors, ["1", "x4", "x7", "x4^2"]);
}

#[test]
fn fringe_is_not_reported() {
    let (spec, a) = g2(false);
    let (einfty, summary) = specseq::run_to_einfty(&spec, &a).unwrap();
    assert!(einfty.dims().keys().all(|b| b.total() <= 10));
    assert_eq!(summary.total_dims.len(), 11);
}

#[test]
fn window_eleven_adds_sources() {
    let spec = FibrationSpec::new(
        PolyAlgebraSpec::bg2(),
        vec![FibreGenerator::new("u5", 5)],
        None,
        11,
        vec!["epsilon".into()],
    )
    .unwrap();
    let arrows = specseq::admissible_differentials(&spec);
    assert!(arrows.iter().any(|a| a.source == Bidegree::new(6, 5) && a.target == Bidegree::new(12, 0)));
    assert!(arrows.iter().all(|a| a.r == 6));
}

fn algebra(prefix: &str, degrees: &[u32]) -> PolyAlgebraSpec {
    PolyAlgebraSpec::new(degrees.iter().enumerate().map(|(i, &d)| Generator::new(format!("{prefix}{i}"), d)).collect())
        .unwrap()
}

proptest! {
    /// One fibre class `g` with `d_{t+1}(g) = b`. Multiplication by `b ≠ 0`
    /// is injective on a polynomial ring, so row 0 becomes `P / (b)` and
    /// row `t` dies.
    #[test]
    fn single_transgression_matches_closed_form(
        degrees in prop::collection::vec(1u32..5, 1..3),
        t in 1u32..5,
        pick in any::<u64>(),
        bound in 6u32..12,
    ) {
        let base = algebra("y", &degrees);
        let spec = FibrationSpec::new(base.clone(), vec![FibreGenerator::new("g", t)], None, bound, vec![]).unwrap();
        let targets = base.basis_in_degree(t + 1);
        let b: Vec<Monomial> = targets.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, m)| m.clone()).collect();
        let image = SymbolicImage::new(b.iter().map(|m| ImageTerm { coefficient: Coefficient::One, base: m.clone(), fibre: "1".into() }).collect());
        let a = DifferentialAssignment::new().with_image("g", t + 1, image);
        let seq = SpectralSequence::compute(&spec, &a).unwrap();
        check_rank_accounting(&seq);
        let einfty = seq.einfty();
        let dim = |s: u32| base.basis_in_degree(s).len();
        let nonzero = !Polynomial::from_terms(b).is_zero();
        for s in 0..=bound {
            let killed = if nonzero && s > t { dim(s - t - 1) } else { 0 };
            prop_assert_eq!(einfty.dim(Bidegree::new(s, 0)), dim(s) - killed);
            if s + t <= bound {
                prop_assert_eq!(einfty.dim(Bidegree::new(s, t)), if nonzero { 0 } else { dim(s) });
            }
        }
    }

    /// Random transgressions of several fibre classes.
    #[test]
    fn random_transgressions_keep_invariants(
        degrees in prop::collection::vec(1u32..5, 1..3),
        fibre in prop::collection::vec((1u32..5, any::<u64>(), any::<bool>()), 1..4),
        bound in 6u32..11,
    ) {
        let base = algebra("y", &degrees);
        let gens: Vec<FibreGenerator> = fibre.iter().enumerate().map(|(i, (t, _, _))| FibreGenerator::new(format!("f{i}"), *t)).collect();
        let spec = FibrationSpec::new(base.clone(), gens, None, bound, vec![]).unwrap();
        let mut a = DifferentialAssignment::new();
        for (i, (t, pick, on)) in fibre.iter().enumerate() {
            if !on {
                continue;
            }
            let terms = base.basis_in_degree(t + 1).into_iter().enumerate()
                .filter(|(j, _)| pick >> (j % 64) & 1 == 1)
                .map(|(_, m)| ImageTerm { coefficient: Coefficient::One, base: m, fibre: "1".into() })
                .collect();
            a = a.with_image(format!("f{i}"), t + 1, SymbolicImage::new(terms));
        }
        let seq = SpectralSequence::compute(&spec, &a).unwrap();
        check_rank_accounting(&seq);
        // E_∞ never exceeds E_2 and the unit survives.
        let e2 = specseq::build_e2(&spec);
        for (b, d) in seq.einfty().dims() {
            prop_assert!(d <= e2.dim(b));
        }
        prop_assert_eq!(seq.einfty().dim(Bidegree::new(0, 0)), 1);
    }
}
