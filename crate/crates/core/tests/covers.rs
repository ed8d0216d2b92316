mod common;

use proptest::prelude::*;

use tropical_rank::covers::{star_tree_rank_01, symmetric_rank_01, tree_rank_01, ZeroOneGraph};
use tropical_rank::rank::exact::{exact_rank, ExactOptions};
use tropical_rank::rank::{Notion, RankValue};
use tropical_rank::{DissimilarityMatrix, Matrix, Scalar, SymmetricMatrix};

fn bits(len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(prop::bool::weighted(0.6), len)
        .prop_map(|b| b.into_iter().map(|x| Scalar::int(x as i64)).collect())
}

fn exact(m: &Matrix, notion: Notion) -> RankValue {
    exact_rank(m, notion, &ExactOptions::default()).unwrap().value.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn symmetric_cover_rank_matches_search(n in 2usize..=5, e in bits(15)) {
        let s = SymmetricMatrix::from_entries(n, e[..n * (n + 1) / 2].to_vec()).unwrap();
        let r = symmetric_rank_01(&s).unwrap();
        let m = Matrix::Symmetric(s);
        prop_assert_eq!(r.value, exact(&m, Notion::Symmetric));
        if let Some(d) = r.decomposition {
            prop_assert!(common::check(&m, &d).is_ok());
        }
    }

    #[test]
    fn tree_cover_rank_matches_search(n in 3usize..=6, e in bits(15)) {
        let d = DissimilarityMatrix::from_entries(n, e[..n * (n - 1) / 2].to_vec()).unwrap();
        let r = tree_rank_01(&d).unwrap();
        let m = Matrix::Dissimilarity(d);
        prop_assert_eq!(r.value, exact(&m, Notion::Tree));
        prop_assert!(common::check(&m, &r.decomposition.unwrap()).is_ok());
    }

    #[test]
    fn star_cover_rank_is_consistent_with_search(n in 3usize..=6, e in bits(15)) {
        let d = DissimilarityMatrix::from_entries(n, e[..n * (n - 1) / 2].to_vec()).unwrap();
        let r = star_tree_rank_01(&d).unwrap();
        let m = Matrix::Dissimilarity(d);
        let truth = exact(&m, Notion::Star);
        prop_assert!(RankValue::Finite(r.lower) <= truth);
        if r.solid == Some(true) {
            prop_assert_eq!(r.value, truth);
            prop_assert!(common::check(&m, &r.decomposition.unwrap()).is_ok());
        }
    }

    #[test]
    fn zero_pattern_round_trip(n in 3usize..=6, e in bits(15)) {
        let d = DissimilarityMatrix::from_entries(n, e[..n * (n - 1) / 2].to_vec()).unwrap();
        let g = ZeroOneGraph::of_dissimilarity(&d);
        for (i, j) in d.pairs() {
            prop_assert_eq!(g.has_edge(i, j), d.get(i, j) == Scalar::ZERO);
        }
    }
}
