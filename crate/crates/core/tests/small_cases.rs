mod common;

use proptest::prelude::*;

use tropical_rank::deficiency::{build_deficiency, chromatic_number, classify_petersen, PetersenClass};
use tropical_rank::polynomial::Basis;
use tropical_rank::rank::{verify, RankValue};
use tropical_rank::small_cases::{
    p_evaluation, pentad_evaluation, star5_rank, star5_rank2_decompose, star5_rank2_test, sym3_rank, tree5_rank,
    tree5_two_term, PTerm,
};
use tropical_rank::{DissimilarityMatrix, Matrix, Scalar, SymmetricMatrix};

fn diss5(e: &[i64]) -> DissimilarityMatrix {
    DissimilarityMatrix::from_entries(5, e.iter().map(|&x| Scalar::int(x)).collect()).unwrap()
}

fn sym3(e: &[i64]) -> SymmetricMatrix {
    SymmetricMatrix::from_entries(3, e.iter().map(|&x| Scalar::int(x)).collect()).unwrap()
}

#[test]
fn sym3_zero_block_has_rank_two_with_two_summands() {
    for (a, b) in [(0, 0), (1, 3), (5, 2), (4, 4)] {
        let m = SymmetricMatrix::from_ints(&[&[0, 0, a], &[0, 0, b], &[a, b, 0]]).unwrap();
        let r = sym3_rank(&m).unwrap();
        let expected = if a == 0 && b == 0 { 1 } else { 2 };
        assert_eq!(r.value, RankValue::Finite(expected));
        let d = r.decomposition.unwrap();
        assert_eq!(d.len(), expected);
        common::check(&m.into(), &d).unwrap();
    }
}

#[test]
fn sym3_all_ones_off_diagonal() {
    let m = SymmetricMatrix::from_ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).unwrap();
    let r = sym3_rank(&m).unwrap();
    // Identity gives 0, each transposition 2, each 3-cycle 3.
    let mut terms = r.determinant_terms.clone();
    terms.sort();
    assert_eq!(terms[0], Scalar::int(0));
    assert!(terms[1] > terms[0]);
    assert_eq!(r.value, RankValue::Finite(3));
}

#[test]
fn pentad_and_p_sizes() {
    let m = diss5(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3]);
    assert_eq!(pentad_evaluation(&m).unwrap().values.len(), 12);
    let p = p_evaluation(&m).unwrap();
    assert_eq!(p.terms.len(), 22);
    for t in &p.terms {
        let mut count = [0; 5];
        for (a, b) in t.factors() {
            count[a] += 1;
            count[b] += 1;
        }
        assert_eq!(count, [2; 5]);
    }
}

#[test]
fn five_cycle_matrix_has_tree_rank_three() {
    let c5 = tropical_rank::catalog::cycle(5);
    let r = tree5_rank(&c5).unwrap();
    assert_eq!(r.value, RankValue::Finite(3));
    assert_eq!(r.five_cycle.unwrap().len(), 5);
    assert!(!star5_rank2_test(&c5).unwrap().passes);
}

#[test]
fn min_matrix_fails_star_test() {
    assert!(!star5_rank2_test(&tropical_rank::catalog::min_matrix(5)).unwrap().passes);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn star5_test_is_label_invariant(e in prop::collection::vec(0i64..10, 10), perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let m = diss5(&e);
        prop_assert_eq!(star5_rank2_test(&m).unwrap().passes, star5_rank2_test(&m.permuted(&perm)).unwrap().passes);
    }

    #[test]
    fn star5_passing_instances_satisfy_the_six_inequalities(e in prop::collection::vec(0i64..10, 10)) {
        let m = diss5(&e);
        let t = star5_rank2_test(&m).unwrap();
        if let Some(perm) = t.relabeling {
            let p = m.permuted(&perm);
            // 1-based names as in the displayed decomposition.
            let g = |i: usize, j: usize| p.get(i - 1, j - 1);
            let a = g(1, 2) + g(3, 4);
            let b = g(1, 4) + g(2, 5) + g(3, 5) - g(1, 5) - g(4, 5);
            prop_assert!(g(1, 4) <= a - g(2, 3));
            prop_assert!(g(3, 4) <= g(1, 4) + g(3, 5) - g(1, 5));
            prop_assert!(g(2, 4) <= g(1, 4) + g(2, 5) - g(1, 5));
            prop_assert!(g(1, 2) <= g(1, 4) + g(2, 5) - g(4, 5));
            prop_assert!(g(1, 3) <= g(1, 4) + g(3, 5) - g(4, 5));
            prop_assert!(g(2, 3) <= b);
        }
        if t.passes {
            let d = star5_rank2_decompose(&m).unwrap();
            prop_assert_eq!(d.len(), 2);
            let mm: Matrix = m.into();
            prop_assert!(common::check(&mm, &d).is_ok());
            prop_assert!(verify(&mm, &d).ok);
        }
    }

    #[test]
    fn star5_rank_is_chromatic_number(e in prop::collection::vec(0i64..10, 10)) {
        let m = diss5(&e);
        let r = star5_rank(&m).unwrap();
        let chi = chromatic_number(&build_deficiency(&m.clone().into(), Basis::StarTree).unwrap()).value;
        prop_assert_eq!(r.value, chi);
        prop_assert!(common::check(&m.into(), &r.decomposition).is_ok());
    }

    #[test]
    fn tree5_conditions_are_equivalent(e in prop::collection::vec(0i64..10, 10)) {
        let m = diss5(&e);
        let r = tree5_rank(&m).unwrap();
        let chi = chromatic_number(&build_deficiency(&m.clone().into(), Basis::Pluecker).unwrap()).value;
        let p = p_evaluation(&m).unwrap();
        let triangle = p.minimizers.iter().any(|&k| matches!(p.terms[k], PTerm::Triangle { .. }));
        let at_most_two = r.value <= RankValue::Finite(2);
        prop_assert_eq!(at_most_two, chi <= RankValue::Finite(2));
        prop_assert_eq!(at_most_two, triangle);
        let class = classify_petersen(&m).unwrap().class;
        prop_assert_eq!(r.value == RankValue::Finite(3), class == PetersenClass::FiveCycle);
        prop_assert_eq!(r.value == RankValue::Finite(1), class == PetersenClass::Trivial);
        prop_assert!(common::check(&m.into(), &r.decomposition).is_ok());
    }

    #[test]
    fn tree5_two_terms_dominate(e in prop::collection::vec(0i64..10, 10)) {
        let m = diss5(&e);
        if let Some([t, u]) = tree5_two_term(&m).unwrap() {
            prop_assert!(common::four_point(&t) && common::four_point(&u));
            prop_assert!(t.dominates(&m) && u.dominates(&m));
            prop_assert_eq!(t.trop_sum(&u).unwrap(), m);
        }
    }

    #[test]
    fn sym3_conditions_are_equivalent(e in prop::collection::vec(-9i64..10, 6)) {
        let m = sym3(&e);
        let r = sym3_rank(&m).unwrap();
        let chi = chromatic_number(&build_deficiency(&m.clone().into(), Basis::SymmetricMinors).unwrap()).value;
        prop_assert_eq!(r.value, chi);
        if let Some(d) = r.decomposition {
            prop_assert!(common::check(&m.into(), &d).is_ok());
        }
    }
}
