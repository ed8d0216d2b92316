//! Exact search against the closed-form classifiers on random small
//! matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropical_rank::deficiency::{chromatic_number, pluecker_deficiency};
use tropical_rank::rank::exact::{exact_rank, ExactOptions};
use tropical_rank::rank::{verify, Notion, RankValue};
use tropical_rank::small_cases::{star5_rank2_test, sym3_rank, tree5_rank};
use tropical_rank::{DissimilarityMatrix, Matrix, Scalar, SymmetricMatrix};

fn random_diss(rng: &mut ChaCha8Rng, n: usize) -> DissimilarityMatrix {
    DissimilarityMatrix::from_fn(n, |_, _| Scalar::int(rng.gen_range(0..10)))
}

#[test]
fn tree_and_star_rank_of_random_five_by_five() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = ExactOptions::default();
    for _ in 0..300 {
        let m = random_diss(&mut rng, 5);
        let w = Matrix::Dissimilarity(m.clone());
        let tree = exact_rank(&w, Notion::Tree, &opts).unwrap();
        let closed = tree5_rank(&m).unwrap();
        assert_eq!(tree.value, Some(closed.value), "{m:?}");
        assert!(verify(&w, tree.decomposition.as_ref().unwrap()).ok);
        assert!(verify(&w, &closed.decomposition).ok);
        let chi = chromatic_number(&pluecker_deficiency(&m)).value;
        assert!(chi <= tree.value.unwrap());

        let star = exact_rank(&w, Notion::Star, &opts).unwrap();
        let le2 = star.value.unwrap() <= RankValue::Finite(2);
        assert_eq!(le2, star5_rank2_test(&m).unwrap().passes, "{m:?}");
    }
}

#[test]
fn symmetric_rank_of_random_three_by_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = ExactOptions::default();
    for _ in 0..300 {
        let m = SymmetricMatrix::from_fn(3, |_, _| Scalar::int(rng.gen_range(0..10)));
        let w = Matrix::Symmetric(m.clone());
        let exact = exact_rank(&w, Notion::Symmetric, &opts).unwrap();
        assert_eq!(exact.value, Some(sym3_rank(&m).unwrap().value), "{m:?}");
    }
}
