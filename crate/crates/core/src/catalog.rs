//! Named example matrices and a seeded random generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{project, DissimilarityMatrix, Matrix, SymmetricMatrix};
use crate::scalar::Scalar;
use crate::tree::{Edge, WeightedTree};

/// The symmetric 4x4 example: 1 in positions `{1,2}` and `{3,4}`, 0
/// everywhere else.
pub fn intro_symmetric() -> SymmetricMatrix {
    SymmetricMatrix::from_ints(&[
        &[0, 1, 0, 0],
        &[1, 0, 0, 0],
        &[0, 0, 0, 1],
        &[0, 0, 1, 0],
    ])
    .expect("square")
}

pub fn intro_dissimilarity() -> DissimilarityMatrix {
    project(&intro_symmetric()).expect("n = 4")
}

/// `M_ij = min(i, j)` with 1-based indices.
pub fn min_matrix(n: usize) -> DissimilarityMatrix {
    DissimilarityMatrix::from_fn(n, |i, j| Scalar::int(i.min(j) as i64 + 1))
}

/// 0/1 symmetric matrix of a graph: 0 on the diagonal and on edges, 1 on
/// non-edges.
pub fn graph_symmetric(n: usize, edges: &[(usize, usize)]) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(n, |i, j| {
        let edge = i == j || edges.contains(&(i, j)) || edges.contains(&(j, i));
        Scalar::int(if edge { 0 } else { 1 })
    })
}

/// 0/1 dissimilarity matrix of a graph: 0 on edges, 1 on non-edges.
pub fn graph_dissimilarity(n: usize, edges: &[(usize, usize)]) -> DissimilarityMatrix {
    DissimilarityMatrix::from_fn(n, |i, j| {
        let edge = edges.contains(&(i, j)) || edges.contains(&(j, i));
        Scalar::int(if edge { 0 } else { 1 })
    })
}

/// Complete bipartite graph `K_{⌊n/2⌋,⌈n/2⌉}` as a 0/1 symmetric matrix.
pub fn bipartite(n: usize) -> SymmetricMatrix {
    let a = n / 2;
    let edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (a..n).map(move |j| (i, j))).collect();
    graph_symmetric(n, &edges)
}

/// The edgeless graph: 0 on the diagonal, 1 off it.
pub fn identity_pattern(n: usize) -> SymmetricMatrix {
    graph_symmetric(n, &[])
}

/// The cycle `C_n` as a 0/1 dissimilarity matrix.
pub fn cycle(n: usize) -> DissimilarityMatrix {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph_dissimilarity(n, &edges)
}

/// A 9x9 matrix whose Pluecker deficiency graph has chromatic number 6.
pub fn tree_rank_six() -> DissimilarityMatrix {
    const ROWS: [[i64; 9]; 9] = [
        [0, 1, 6, 7, 2, 3, 8, 9, 6],
        [1, 0, 2, 7, 9, 7, 5, 7, 1],
        [6, 2, 0, 6, 0, 6, 1, 7, 1],
        [7, 7, 6, 0, 3, 3, 8, 5, 3],
        [2, 9, 0, 3, 0, 5, 7, 5, 7],
        [3, 7, 6, 3, 5, 0, 9, 3, 9],
        [8, 5, 1, 8, 7, 9, 0, 2, 3],
        [9, 7, 7, 5, 5, 3, 2, 0, 8],
        [6, 1, 1, 3, 7, 9, 3, 8, 0],
    ];
    DissimilarityMatrix::from_fn(9, |i, j| Scalar::int(ROWS[i][j]))
}

/// `k` copies of [`tree_rank_six`] on the diagonal, 10 everywhere else.
pub fn tree_rank_six_blocks(k: usize) -> DissimilarityMatrix {
    let m = tree_rank_six();
    DissimilarityMatrix::from_fn(9 * k, |i, j| {
        if i / 9 == j / 9 {
            m.get(i % 9, j % 9)
        } else {
            Scalar::int(10)
        }
    })
}

/// A 4x4 symmetric matrix with every 3x3 principal submatrix tropically
/// singular but symmetric rank 4.
pub fn singular_minors_rank_four() -> SymmetricMatrix {
    SymmetricMatrix::from_ints(&[
        &[0, 0, 1, 2],
        &[0, 0, 2, 1],
        &[1, 2, 0, 0],
        &[2, 1, 0, 0],
    ])
    .expect("square")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Symmetric,
    Dissimilarity,
}

/// Uniform integer entries in `lo..=hi`.
pub fn random(kind: Kind, n: usize, lo: i64, hi: i64, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_with(&mut rng, kind, n, lo, hi)
}

pub fn random_with(rng: &mut impl Rng, kind: Kind, n: usize, lo: i64, hi: i64) -> Matrix {
    match kind {
        Kind::Symmetric => {
            Matrix::Symmetric(SymmetricMatrix::from_fn(n, |_, _| Scalar::int(rng.gen_range(lo..=hi))))
        }
        Kind::Dissimilarity => Matrix::Dissimilarity(DissimilarityMatrix::from_fn(n, |_, _| {
            Scalar::int(rng.gen_range(lo..=hi))
        })),
    }
}

/// Random symmetric matrix of finite symmetric rank: off-diagonal entries
/// in `lo..=hi`, and each diagonal entry at most the smallest off-diagonal
/// entry of its row.
pub fn random_finite_symmetric(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> SymmetricMatrix {
    let off = SymmetricMatrix::from_fn(n, |_, _| Scalar::int(rng.gen_range(lo..=hi)));
    let diag: Vec<Scalar> = (0..n)
        .map(|i| {
            let m = (0..n).filter(|&j| j != i).map(|j| off.get(i, j)).min().unwrap_or(Scalar::int(hi));
            m - Scalar::int(rng.gen_range(0..=3))
        })
        .collect();
    SymmetricMatrix::from_fn(n, |i, j| if i == j { diag[i] } else { off.get(i, j) })
}

/// Leaf distances of a random binary tree: leaves are inserted one at a
/// time on a random edge, pendant weights in `lo..=hi`, internal weights in
/// `-hi..=0`.
pub fn random_tree_matrix(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> DissimilarityMatrix {
    assert!(n >= 2);
    // Edges as (u, v); leaves are 0..n, internal vertices n.. in creation order.
    let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
    let mut next = n;
    for leaf in 2..n {
        let k = rng.gen_range(0..edges.len());
        let (u, v) = edges.swap_remove(k);
        let w = next;
        next += 1;
        edges.extend([(u, w), (w, v), (w, leaf)]);
    }
    let tree = WeightedTree {
        leaves: n,
        vertices: next,
        edges: edges
            .into_iter()
            .map(|(u, v)| {
                let internal = u >= n && v >= n;
                let weight = if internal { rng.gen_range(-hi.abs()..=0) } else { rng.gen_range(lo..=hi) };
                Edge { u, v, weight: Scalar::int(weight) }
            })
            .collect(),
    };
    tree.leaf_distances()
}

pub const NAMES: [&str; 9] = [
    "intro-exs",
    "min",
    "bipartite",
    "identity-pattern",
    "cycle",
    "tr6",
    "tr6-blocks",
    "sym6-remark",
    "random",
];

/// Parameters for [`generate`]: `n` for sized families, `k` for block
/// matrices, and the random options.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub symmetric: bool,
    pub seed: u64,
    pub lo: i64,
    pub hi: i64,
}

pub fn generate(name: &str, p: &Params) -> Result<Matrix> {
    let need_n = |min: usize| -> Result<usize> {
        let n = p
            .n
            .ok_or_else(|| Error::Precondition(format!("{name} needs a size n")))?;
        if n < min {
            return Err(Error::Precondition(format!("{name} needs n >= {min}")));
        }
        Ok(n)
    };
    Ok(match name {
        "intro-exs" => {
            if p.symmetric {
                Matrix::Symmetric(intro_symmetric())
            } else {
                Matrix::Dissimilarity(intro_dissimilarity())
            }
        }
        "min" => Matrix::Dissimilarity(min_matrix(need_n(2)?)),
        "bipartite" => Matrix::Symmetric(bipartite(need_n(1)?)),
        "identity-pattern" => Matrix::Symmetric(identity_pattern(need_n(1)?)),
        "cycle" => Matrix::Dissimilarity(cycle(need_n(3)?)),
        "tr6" => Matrix::Dissimilarity(tree_rank_six()),
        "tr6-blocks" => {
            let k = p.k.or(p.n).unwrap_or(1);
            if k == 0 {
                return Err(Error::Precondition("tr6-blocks needs k >= 1".into()));
            }
            Matrix::Dissimilarity(tree_rank_six_blocks(k))
        }
        "sym6-remark" => Matrix::Symmetric(singular_minors_rank_four()),
        "random" => {
            let n = need_n(if p.symmetric { 1 } else { 2 })?;
            if p.lo > p.hi {
                return Err(Error::Precondition("random needs lo <= hi".into()));
            }
            let kind = if p.symmetric {
                Kind::Symmetric
            } else {
                Kind::Dissimilarity
            };
            random(kind, n, p.lo, p.hi, p.seed)
        }
        other => {
            return Err(Error::UnknownName(format!(
                "generator {other:?}; known: {}",
                NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_matrix_shape() {
        let m = tree_rank_six_blocks(2);
        assert_eq!(m.n(), 18);
        assert_eq!(m.get(0, 9), Scalar::int(10));
        assert_eq!(m.get(9, 10), m.get(0, 1));
    }

    #[test]
    fn random_trees_are_tree_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..9 {
            let m = random_tree_matrix(&mut rng, n, -5, 5);
            assert!(crate::membership::is_tree_matrix(&m));
        }
    }

    #[test]
    fn bipartite_zero_count() {
        let m = bipartite(5);
        let zeros = m.pairs().into_iter().filter(|&(i, j)| i != j && m.get(i, j).is_zero()).count();
        assert_eq!(zeros, 6);
    }
}
