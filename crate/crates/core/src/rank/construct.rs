//! Constructive upper bounds: explicit decompositions of size at most
//! `max{n, ⌊n²/4⌋}` (symmetric), `n - 2` (star tree) and `n - 3` for
//! `n >= 6` (tree).
//!
//! Entries written as "∞" in hand constructions are partial vectors here
//! (`None`), padded at the end with a large constant. The constant starts at
//! `1 + max|M|`, every result is verified, and the constant doubles on
//! failure.

use crate::error::{Error, Result};
use crate::matrix::{
    project, star_generator, DissimilarityMatrix, Matrix, RowVector, SymmetricMatrix,
};
use crate::membership::{is_tree_matrix, pfaffian_minimizers};
use crate::scalar::Scalar;
use crate::tree::scatter_tree;

use super::{verify, Decomposition};

const RETRIES: usize = 8;

type Partial = Vec<Option<Scalar>>;

/// Whether every `M_ii + M_jj <= 2 M_ij`, i.e. the symmetric rank is finite.
pub fn symmetric_rank_finite(m: &SymmetricMatrix) -> bool {
    infinite_witness(m).is_none()
}

/// The first pair (0-based, lexicographic) with `M_ii + M_jj > 2 M_ij`.
pub fn infinite_witness(m: &SymmetricMatrix) -> Option<(usize, usize)> {
    m.pairs()
        .into_iter()
        .find(|&(i, j)| m.get(i, i) + m.get(j, j) > m.get(i, j).times(2))
}

/// Subtract `M_ii/2 + M_jj/2` from every entry. Adding the returned offsets
/// to the generators of a decomposition of `M'` gives one of `M`.
pub fn normalize_diagonal(m: &SymmetricMatrix) -> (SymmetricMatrix, Vec<Scalar>) {
    let d: Vec<Scalar> = (0..m.n()).map(|i| m.get(i, i).half()).collect();
    let out = SymmetricMatrix::from_fn(m.n(), |i, j| m.get(i, j) - d[i] - d[j]);
    (out, d)
}

fn pad(v: &Partial, c: Scalar) -> RowVector {
    let lo = v.iter().flatten().copied().min().unwrap_or(Scalar::ZERO);
    let p = c.half().max(c - lo);
    RowVector::new(v.iter().map(|x| x.unwrap_or(p)).collect())
}

fn partial(n: usize, entries: &[(usize, Scalar)]) -> Partial {
    let mut v = vec![None; n];
    for &(i, x) in entries {
        v[i] = Some(x);
    }
    v
}

fn first_c(max_abs: Scalar) -> Scalar {
    max_abs + Scalar::ONE
}

fn retry<F>(target: &Matrix, max_abs: Scalar, build: F) -> Result<Decomposition>
where
    F: Fn(Scalar) -> Result<Decomposition>,
{
    let mut c = first_c(max_abs);
    for _ in 0..RETRIES {
        let d = build(c)?;
        if verify(target, &d).ok {
            return Ok(d);
        }
        c = c.times(2);
    }
    Err(Error::Verification(format!(
        "construction did not verify after {RETRIES} attempts"
    )))
}

/// Decomposition into at most `max{n, ⌊n²/4⌋}` symmetric rank-one matrices.
pub fn symmetric_upper_decomposition(m: &SymmetricMatrix) -> Result<Decomposition> {
    if let Some((i, j)) = infinite_witness(m) {
        return Err(Error::Precondition(format!(
            "symmetric rank is infinite: M[{i},{i}] + M[{j},{j}] > 2 M[{i},{j}]",
            i = i + 1,
            j = j + 1
        )));
    }
    let (z, offsets) = normalize_diagonal(m);
    let idx: Vec<usize> = (0..m.n()).collect();
    let (parts, _) = sym_block(&z, &idx, false);
    let target = Matrix::Symmetric(m.clone());
    retry(&target, z.max_abs(), |c| {
        Ok(Decomposition::symmetric(
            parts
                .iter()
                .map(|p| {
                    let v = pad(p, c);
                    RowVector::new(v.values.iter().zip(&offsets).map(|(&x, &o)| x + o).collect())
                })
                .collect(),
        ))
    })
}

// Zero-diagonal `m`, restricted to `idx`. With `relaxed`, one diagonal
// entry (returned) may be attained only from above.
fn sym_block(m: &SymmetricMatrix, idx: &[usize], relaxed: bool) -> (Vec<Partial>, Option<usize>) {
    let n = m.n();
    let g = |a: usize, b: usize| m.get(a, b);
    match idx.len() {
        0 => (Vec::new(), None),
        1 => (vec![partial(n, &[(idx[0], Scalar::ZERO)])], None),
        2 => {
            let (a, b) = (idx[0], idx[1]);
            let c = g(a, b);
            let mut out = vec![partial(n, &[(a, Scalar::ZERO), (b, c)])];
            if relaxed {
                return (out, Some(b));
            }
            out.push(partial(n, &[(a, c), (b, Scalar::ZERO)]));
            (out, None)
        }
        3 => {
            let (mut a, b, mut c) = (idx[0], idx[1], idx[2]);
            if g(a, b) < g(b, c) {
                std::mem::swap(&mut a, &mut c);
            }
            let mut out = vec![
                partial(n, &[(a, Scalar::ZERO), (b, g(a, b)), (c, g(a, c))]),
                partial(n, &[(b, Scalar::ZERO), (c, g(b, c))]),
            ];
            if relaxed {
                return (out, Some(c));
            }
            out.push(partial(n, &[(c, Scalar::ZERO)]));
            (out, None)
        }
        _ => {
            let mut best = (idx[0], idx[1]);
            for (x, &p) in idx.iter().enumerate() {
                for &q in &idx[x + 1..] {
                    if g(p, q) < g(best.0, best.1) {
                        best = (p, q);
                    }
                }
            }
            let (mut one, mut two) = best;
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != one && x != two).collect();
            let (mut out, exceptional) = sym_block(m, &rest, true);
            let three = *rest
                .iter()
                .find(|&&x| Some(x) != exceptional)
                .expect("at least two remaining indices");
            if g(one, three) < g(two, three) {
                std::mem::swap(&mut one, &mut two);
            }
            for &i in &rest {
                if i != three {
                    out.push(partial(n, &[(one, g(one, i)), (two, g(two, i)), (i, Scalar::ZERO)]));
                }
            }
            out.push(partial(
                n,
                &[(one, Scalar::ZERO), (two, g(one, two)), (three, g(one, three))],
            ));
            out.push(partial(n, &[(two, Scalar::ZERO), (three, g(two, three))]));
            (out, None)
        }
    }
}

/// Decomposition into at most `n - 2` star tree matrices.
pub fn star_upper_decomposition(m: &DissimilarityMatrix) -> Result<Decomposition> {
    let n = m.n();
    if n < 3 {
        return Err(Error::Precondition(format!("star tree rank needs n >= 3, got {n}")));
    }
    let target = Matrix::Dissimilarity(m.clone());
    retry(&target, m.max_abs(), |c| {
        let parts = star_block(m, n, c);
        Ok(Decomposition::star(parts.iter().map(|p| pad(p, c)).collect()))
    })
}

// Star decomposition of the leading `k x k` block.
fn star_block(m: &DissimilarityMatrix, k: usize, c: Scalar) -> Vec<Partial> {
    let n = m.n();
    if k == 3 {
        let sub = m.principal(&[0, 1, 2]);
        let v = star_generator(&sub).expect("every 3x3 matrix is a star tree");
        return vec![partial(n, &[(0, v.values[0]), (1, v.values[1]), (2, v.values[2])])];
    }
    let mut out = star_block(m, k - 1, c);
    let last = k - 1;
    let mut w: Vec<(usize, Scalar)> = (0..last).map(|i| (i, m.get(i, last) + c)).collect();
    w.push((last, -c));
    out.push(partial(n, &w));
    out
}

/// Decomposition into tree matrices: 1, 2, 3 summands for `n = 3, 4, 5`
/// and at most `n - 3` for `n >= 6`.
pub fn tree_upper_decomposition(m: &DissimilarityMatrix) -> Result<Decomposition> {
    let n = m.n();
    if n < 3 {
        return Err(Error::Precondition(format!("tree rank needs n >= 3, got {n}")));
    }
    if is_tree_matrix(m) {
        return Ok(Decomposition::tree(vec![m.clone()]));
    }
    match n {
        4 => Ok(star_upper_decomposition(m)?.star_as_tree()),
        5 => match crate::small_cases::tree5_two_term(m)? {
            Some(pair) => Ok(Decomposition::tree(pair.to_vec())),
            None => Ok(star_upper_decomposition(m)?.star_as_tree()),
        },
        _ => {
            let target = Matrix::Dissimilarity(m.clone());
            retry(&target, m.max_abs(), |c| tree_peel(m, c).map(Decomposition::tree))
        }
    }
}

// Three tree matrices for the leading 6x6 block, scattered to size n, then
// one star tree per further index.
fn tree_peel(m: &DissimilarityMatrix, c: Scalar) -> Result<Vec<DissimilarityMatrix>> {
    let n = m.n();
    let six: Vec<usize> = (0..6).collect();
    let mut out: Vec<DissimilarityMatrix> = tree_six(&m.principal(&six), c)?
        .iter()
        .map(|t| scatter_tree(t, &six, n, c))
        .collect::<Result<_>>()?;
    for i in 6..n {
        let v = RowVector::new(
            (0..n)
                .map(|j| if j == i { -c } else { c + m.get(i, j) })
                .collect(),
        );
        out.push(crate::matrix::star_tree_matrix(&v));
    }
    Ok(out)
}

/// Three tree matrices whose tropical sum is the 6x6 matrix `m`, built from
/// a minimizing term of the tropical Pfaffian.
pub fn tree_six(m: &DissimilarityMatrix, c: Scalar) -> Result<Vec<DissimilarityMatrix>> {
    let matching = pfaffian_minimizers(m)?[0];
    // Relabel so the matching is 01|23|45.
    let perm: Vec<usize> = matching.iter().flat_map(|&(a, b)| [a, b]).collect();
    let p = m.permuted(&perm);
    let g = |a: usize, b: usize| p.get(a, b);
    let x1 = (g(0, 2) + g(1, 3)).min(g(0, 3) + g(1, 2)) - g(0, 1);
    let x2 = (g(0, 4) + g(1, 5)).min(g(0, 5) + g(1, 4)) - g(4, 5);
    let x3 = (g(2, 4) + g(3, 5)).min(g(2, 5) + g(3, 4)) - g(2, 3);
    let blocks: [([usize; 4], (usize, usize), Scalar); 3] = [
        ([0, 1, 2, 3], (2, 3), x1),
        ([0, 1, 4, 5], (0, 1), x2),
        ([2, 3, 4, 5], (4, 5), x3),
    ];
    let mut out = Vec::with_capacity(3);
    for (idx, (a, b), x) in blocks {
        let block = p.principal(&idx);
        let ia = idx.iter().position(|&t| t == a).unwrap();
        let ib = idx.iter().position(|&t| t == b).unwrap();
        let block = block.with_entry(ia, ib, x);
        // Positions in the original labelling.
        let orig: Vec<usize> = idx.iter().map(|&t| perm[t]).collect();
        out.push(scatter_tree(&block, &orig, 6, c)?);
    }
    Ok(out)
}

/// The tree rank bound from peeling: any decomposition of a principal
/// submatrix plus one star tree per remaining index.
pub fn peel_decomposition(
    m: &DissimilarityMatrix,
    idx: &[usize],
    sub: &[DissimilarityMatrix],
) -> Result<Decomposition> {
    let n = m.n();
    let target = Matrix::Dissimilarity(m.clone());
    retry(&target, m.max_abs(), |c| {
        let mut out: Vec<DissimilarityMatrix> = sub
            .iter()
            .map(|t| scatter_tree(t, idx, n, c))
            .collect::<Result<_>>()?;
        for i in (0..n).filter(|i| !idx.contains(i)) {
            let v = RowVector::new(
                (0..n)
                    .map(|j| if j == i { -c } else { c + m.get(i, j) })
                    .collect(),
            );
            out.push(crate::matrix::star_tree_matrix(&v));
        }
        Ok(Decomposition::tree(out))
    })
}

/// Upper decomposition for any notion.
pub fn upper_decomposition(m: &Matrix, notion: super::Notion) -> Result<Decomposition> {
    use super::Notion;
    notion.check_kind(m)?;
    match (notion, m) {
        (Notion::Symmetric, Matrix::Symmetric(s)) => symmetric_upper_decomposition(s),
        (Notion::Star, Matrix::Dissimilarity(d)) => star_upper_decomposition(d),
        (Notion::Tree, Matrix::Dissimilarity(d)) => tree_upper_decomposition(d),
        _ => unreachable!("kind checked"),
    }
}

/// Projection of a symmetric decomposition to a star tree decomposition.
pub fn project_decomposition(d: &Decomposition) -> Result<Decomposition> {
    let mats: Vec<DissimilarityMatrix> = d
        .symmetric_matrices()
        .iter()
        .map(project)
        .collect::<Result<_>>()?;
    Ok(Decomposition {
        notion: super::Notion::Star,
        summands: mats
            .into_iter()
            .zip(&d.summands)
            .map(|(m, s)| super::Summand {
                matrix: Matrix::Dissimilarity(m),
                generator: s.generator.clone(),
            })
            .collect(),
    })
}
