//! Membership in the three rank-one varieties and small singularity tests.

use crate::error::{Error, Result};
use crate::matrix::{DissimilarityMatrix, SymmetricMatrix};
use crate::polynomial::{pairings, quadruples, Pair};
use crate::scalar::Scalar;

/// Rank one in the symmetric sense: every tropical 2x2 minor vanishes, which
/// for symmetric matrices means `M_ij + M_kl = M_il + M_kj` throughout.
pub fn is_rank1_symmetric(m: &SymmetricMatrix) -> bool {
    let n = m.n();
    // M = v^T ⊙ v forces v_i = M_ii / 2; compare every entry against that.
    (0..n).all(|i| (i..n).all(|j| (m.get(i, i) + m.get(j, j)) == m.get(i, j).times(2)))
}

fn pairing_values(m: &DissimilarityMatrix, q: [usize; 4]) -> [Scalar; 3] {
    let p = pairings(q[0], q[1], q[2], q[3]);
    let v = |x: &[Pair; 2]| m.get(x[0].0, x[0].1) + m.get(x[1].0, x[1].1);
    [v(&p[0]), v(&p[1]), v(&p[2])]
}

/// All three pairings agree on every quadruple.
pub fn is_star_tree(m: &DissimilarityMatrix) -> bool {
    quadruples(m.n()).into_iter().all(|q| {
        let v = pairing_values(m, q);
        v[0] == v[1] && v[1] == v[2]
    })
}

/// Tropical four-point condition: on every quadruple the minimum of the three
/// pairings is attained at least twice.
pub fn is_tree_matrix(m: &DissimilarityMatrix) -> bool {
    first_four_point_violation(m).is_none()
}

/// The first quadruple (lexicographically) whose pairing minimum is unique.
pub fn first_four_point_violation(m: &DissimilarityMatrix) -> Option<[usize; 4]> {
    quadruples(m.n()).into_iter().find(|&q| {
        let v = pairing_values(m, q);
        let lo = v.iter().min().unwrap();
        v.iter().filter(|x| *x == lo).count() < 2
    })
}

/// The six terms `Σ M_{i,σ(i)}` of the tropical 3x3 determinant, indexed by
/// permutations in lexicographic order.
pub fn determinant_terms_3x3(m: &SymmetricMatrix) -> Result<[Scalar; 6]> {
    if m.n() != 3 {
        return Err(Error::Dimension(format!("expected a 3x3 matrix, got {}", m.n())));
    }
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    Ok(PERMS.map(|s| m.get(0, s[0]) + m.get(1, s[1]) + m.get(2, s[2])))
}

pub fn is_tropically_singular_3x3(m: &SymmetricMatrix) -> Result<bool> {
    let t = determinant_terms_3x3(m)?;
    let lo = t.iter().min().unwrap();
    Ok(t.iter().filter(|x| *x == lo).count() >= 2)
}

pub type Matching = [Pair; 3];

/// The 15 perfect matchings of six points, each sorted.
pub fn perfect_matchings_6() -> Vec<Matching> {
    let mut out = Vec::new();
    for a in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&x| x != a).collect();
        let b = rest[0];
        for &c in &rest[1..] {
            let others: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != c).collect();
            out.push([(0, a), (b, c), (others[0], others[1])]);
        }
    }
    out
}

/// Perfect matchings minimizing the total matched dissimilarity: the
/// minimizers of the tropical Pfaffian.
pub fn pfaffian_minimizers(m: &DissimilarityMatrix) -> Result<Vec<Matching>> {
    if m.n() != 6 {
        return Err(Error::Dimension(format!("expected a 6x6 matrix, got {}", m.n())));
    }
    let all = perfect_matchings_6();
    let val = |mt: &Matching| -> Scalar { mt.iter().map(|&(i, j)| m.get(i, j)).sum() };
    let lo = all.iter().map(val).min().unwrap();
    Ok(all.into_iter().filter(|mt| val(mt) == lo).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_distinct_matchings() {
        let ms = perfect_matchings_6();
        assert_eq!(ms.len(), 15);
        let set: std::collections::BTreeSet<_> = ms.iter().collect();
        assert_eq!(set.len(), 15);
        for m in &ms {
            let mut pts: Vec<usize> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
            pts.sort();
            assert_eq!(pts, vec![0, 1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn zero_one_swap_is_not_rank_one() {
        let m = SymmetricMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(!is_rank1_symmetric(&m));
    }
}
