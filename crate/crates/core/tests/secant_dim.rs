use tropical_rank::rank::Notion;
use tropical_rank::secant_dim::{ambient_dimension, dimension_formula, sampled_local_dimension};

#[test]
fn formula_grows_with_r_and_saturates() {
    for notion in [Notion::Symmetric, Notion::Star, Notion::Tree] {
        for n in 3..=12 {
            let amb = ambient_dimension(notion, n);
            let mut prev = 0;
            for r in 1..=n {
                let d = dimension_formula(notion, n, r);
                assert!(d >= prev, "{notion:?} n={n} r={r}");
                assert!(d <= amb);
                prev = d;
            }
            assert_eq!(prev, amb, "{notion:?} n={n} fills the ambient space");
        }
    }
}

#[test]
fn sampled_dimension_matches_formula_on_small_grid() {
    for notion in [Notion::Symmetric, Notion::Star, Notion::Tree] {
        for n in 4..=6 {
            for r in 1..=3 {
                let rep = sampled_local_dimension(notion, n, r, 4, 7).unwrap();
                assert_eq!(rep.sampled_value, rep.formula_value, "{notion:?} n={n} r={r}");
                assert!(rep.sampled_value <= rep.parameters);
            }
        }
    }
}
