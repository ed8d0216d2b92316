//! Closed-form rank classifiers for 3x3 symmetric matrices and 5x5
//! dissimilarity matrices, with explicit decompositions.

use serde::Serialize;

use crate::deficiency::{classify_petersen, permutations, PetersenClass};
use crate::error::{Error, Result};
use crate::matrix::{
    rank_one_generator, star_generator, DissimilarityMatrix, Matrix, RowVector,
    SymmetricMatrix,
};
use crate::membership::{determinant_terms_3x3, is_star_tree, is_tree_matrix};
use crate::polynomial::{pair, Pair};
use crate::rank::construct::{
    infinite_witness, normalize_diagonal, star_upper_decomposition, symmetric_upper_decomposition,
};
use crate::rank::{verify, Decomposition, RankValue};
use crate::scalar::Scalar;
use crate::tree::scatter_tree;

fn need(n: usize, want: usize) -> Result<()> {
    if n == want {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a {want}x{want} matrix, got {n}x{n}")))
    }
}

fn big(m: &Matrix) -> Scalar {
    let a = match m {
        Matrix::Symmetric(s) => s.max_abs(),
        Matrix::Dissimilarity(d) => d.max_abs(),
    };
    a + Scalar::ONE
}

/// Run `build` with `c = 1 + max|M|`, doubling `c` until the result
/// verifies.
fn verified(m: &Matrix, build: impl Fn(Scalar) -> Result<Decomposition>) -> Result<Decomposition> {
    let mut c = big(m);
    for _ in 0..8 {
        let d = build(c)?;
        if verify(m, &d).ok {
            return Ok(d);
        }
        c = c.times(2);
    }
    Err(Error::Verification("small-case decomposition did not verify".into()))
}

// ---------------------------------------------------------------------------
// 3x3 symmetric

#[derive(Clone, Debug, Serialize)]
pub struct Sym3Rank {
    pub value: RankValue,
    /// 0-based pair with `M_ii + M_jj > 2 M_ij`.
    pub infinite_pair: Option<(usize, usize)>,
    pub determinant_terms: Vec<Scalar>,
    pub decomposition: Option<Decomposition>,
}

pub fn sym3_rank(m: &SymmetricMatrix) -> Result<Sym3Rank> {
    need(m.n(), 3)?;
    let terms = determinant_terms_3x3(m)?.to_vec();
    let mut out = Sym3Rank {
        value: RankValue::Infinite,
        infinite_pair: infinite_witness(m),
        determinant_terms: terms.clone(),
        decomposition: None,
    };
    if out.infinite_pair.is_some() {
        return Ok(out);
    }
    if let Some(v) = rank_one_generator(m) {
        out.value = RankValue::Finite(1);
        out.decomposition = Some(Decomposition::symmetric(vec![v]));
        return Ok(out);
    }
    let lo = *terms.iter().min().unwrap();
    let singular = terms.iter().filter(|&&t| t == lo).count() >= 2;
    if singular {
        out.value = RankValue::Finite(2);
        out.decomposition = Some(sym3_two_term(m)?);
    } else {
        out.value = RankValue::Finite(3);
        out.decomposition = Some(symmetric_upper_decomposition(m)?);
    }
    Ok(out)
}

// After normalizing the diagonal some off-diagonal entry is zero; with it at
// (a, b): M = [0 0 ∞; 0 0 ∞; ∞ ∞ ∞] ⊕ (M_ac, M_bc, 0)^T ⊙ (M_ac, M_bc, 0).
fn sym3_two_term(m: &SymmetricMatrix) -> Result<Decomposition> {
    let (z, off) = normalize_diagonal(m);
    let (a, b) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(i, j)| z.get(i, j).is_zero())
        .ok_or_else(|| Error::Precondition("matrix is not tropically singular".into()))?;
    let c = 3 - a - b;
    let target = Matrix::Symmetric(m.clone());
    verified(&target, |big| {
        let mut first = vec![Scalar::ZERO; 3];
        first[c] = big;
        let mut second = vec![Scalar::ZERO; 3];
        second[a] = z.get(a, c);
        second[b] = z.get(b, c);
        let shift = |v: Vec<Scalar>| RowVector::new(v.iter().zip(&off).map(|(&x, &o)| x + o).collect());
        Ok(Decomposition::symmetric(vec![shift(first), shift(second)]))
    })
}

// ---------------------------------------------------------------------------
// 5x5: cycles, the pentad and the polynomial P

/// The twelve 5-cycles on `0..5`, as vertex sequences starting at 0.
pub fn five_cycles() -> Vec<[usize; 5]> {
    permutations(4)
        .into_iter()
        .map(|p| [0, p[0] + 1, p[1] + 1, p[2] + 1, p[3] + 1])
        .filter(|c| c[1] < c[4])
        .collect()
}

fn cycle_edges(c: &[usize; 5]) -> [Pair; 5] {
    std::array::from_fn(|k| pair(c[k], c[(k + 1) % 5]))
}

fn sum_of(m: &DissimilarityMatrix, ps: &[Pair]) -> Scalar {
    ps.iter().map(|&(i, j)| m.get(i, j)).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct PentadEvaluation {
    pub cycles: Vec<[usize; 5]>,
    pub values: Vec<Scalar>,
    pub minimizers: Vec<usize>,
}

pub fn pentad_evaluation(m: &DissimilarityMatrix) -> Result<PentadEvaluation> {
    need(m.n(), 5)?;
    let cycles = five_cycles();
    let values: Vec<Scalar> = cycles.iter().map(|c| sum_of(m, &cycle_edges(c))).collect();
    let lo = *values.iter().min().unwrap();
    let minimizers = (0..values.len()).filter(|&k| values[k] == lo).collect();
    Ok(PentadEvaluation {
        cycles,
        values,
        minimizers,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PTerm {
    /// `x_{c0 c1} x_{c1 c2} ... x_{c4 c0}`
    Pentagon { cycle: [usize; 5] },
    /// `x_ab x_ac x_bc x_de²`
    Triangle { triangle: [usize; 3], pair: Pair },
}

impl PTerm {
    pub fn factors(&self) -> Vec<Pair> {
        match *self {
            PTerm::Pentagon { cycle } => cycle_edges(&cycle).to_vec(),
            PTerm::Triangle {
                triangle: [a, b, c],
                pair: p,
            } => vec![pair(a, b), pair(a, c), pair(b, c), p, p],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PEvaluation {
    pub terms: Vec<PTerm>,
    pub values: Vec<Scalar>,
    pub minimizers: Vec<usize>,
}

/// The 22 terms of degree five in which every index occurs exactly twice.
pub fn p_terms() -> Vec<PTerm> {
    let mut out: Vec<PTerm> = five_cycles()
        .into_iter()
        .map(|cycle| PTerm::Pentagon { cycle })
        .collect();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                let rest: Vec<usize> = (0..5).filter(|&x| x != a && x != b && x != c).collect();
                out.push(PTerm::Triangle {
                    triangle: [a, b, c],
                    pair: (rest[0], rest[1]),
                });
            }
        }
    }
    out
}

pub fn p_evaluation(m: &DissimilarityMatrix) -> Result<PEvaluation> {
    need(m.n(), 5)?;
    let terms = p_terms();
    let values: Vec<Scalar> = terms.iter().map(|t| sum_of(m, &t.factors())).collect();
    let lo = *values.iter().min().unwrap();
    let minimizers = (0..values.len()).filter(|&k| values[k] == lo).collect();
    Ok(PEvaluation {
        terms,
        values,
        minimizers,
    })
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

// ---------------------------------------------------------------------------
// 5x5 star tree rank

#[derive(Clone, Debug, Serialize)]
pub struct Star5Test {
    pub passes: bool,
    /// `perm` such that `M.permuted(perm)` is in the normalized form, where
    /// the cycles 0-1-2-3-4 and 0-2-1-3-4 both minimize the pentad and
    /// `M_03 + M_12 <= M_01 + M_23 = M_02 + M_13`.
    pub relabeling: Option<Vec<usize>>,
    /// The two minimizing cycles in the original labels.
    pub cycles: Option<([usize; 5], [usize; 5])>,
}

fn star5_normal(m: &DissimilarityMatrix) -> bool {
    let g = |i: usize, j: usize| m.get(i, j);
    let c1 = sum_of(m, &cycle_edges(&[0, 1, 2, 3, 4]));
    let c2 = sum_of(m, &cycle_edges(&[0, 2, 1, 3, 4]));
    if c1 != c2 {
        return false;
    }
    let lo = five_cycles()
        .iter()
        .map(|c| sum_of(m, &cycle_edges(c)))
        .min()
        .unwrap();
    c1 == lo && g(0, 1) + g(2, 3) == g(0, 2) + g(1, 3) && g(0, 3) + g(1, 2) <= g(0, 1) + g(2, 3)
}

/// Whether two minimizing pentad terms differ by a transposition and satisfy
/// the normalized inequality, for some relabeling. Star trees pass directly.
pub fn star5_rank2_test(m: &DissimilarityMatrix) -> Result<Star5Test> {
    need(m.n(), 5)?;
    if is_star_tree(m) {
        return Ok(Star5Test {
            passes: true,
            relabeling: None,
            cycles: None,
        });
    }
    for perm in permutations(5) {
        if star5_normal(&m.permuted(&perm)) {
            let back = |c: [usize; 5]| c.map(|x| perm[x]);
            return Ok(Star5Test {
                passes: true,
                cycles: Some((back([0, 1, 2, 3, 4]), back([0, 2, 1, 3, 4]))),
                relabeling: Some(perm),
            });
        }
    }
    Ok(Star5Test {
        passes: false,
        relabeling: None,
        cycles: None,
    })
}

/// Two star tree matrices summing to `m`, for inputs passing
/// [`star5_rank2_test`].
pub fn star5_rank2_decompose(m: &DissimilarityMatrix) -> Result<Decomposition> {
    let test = star5_rank2_test(m)?;
    if !test.passes {
        return Err(Error::Precondition("matrix fails the rank-2 star tree test".into()));
    }
    let Some(perm) = test.relabeling else {
        let v = star_generator(m).expect("star tree");
        return Ok(Decomposition::star(vec![v.clone(), v]));
    };
    let p = m.permuted(&perm);
    let inv = inverse(&perm);
    let g = |i: usize, j: usize| p.get(i, j);
    let a = g(0, 1) + g(2, 3);
    let target = Matrix::Dissimilarity(m.clone());
    verified(&target, |c| {
        // Star tree on {0,1,2,3} with completion A - M_12 at (0,3), padded at 4.
        let block = DissimilarityMatrix::from_fn(4, |i, j| {
            if (i, j) == (0, 3) || (i, j) == (3, 0) {
                a - g(1, 2)
            } else {
                g(i, j)
            }
        });
        let u = star_generator(&block)
            .ok_or_else(|| Error::Verification("completed block is not a star tree".into()))?;
        let first = crate::matrix::extend_generator(&u, 5, c);
        // Determined by rows 3 and 4.
        let v0 = (g(0, 3) + g(0, 4) - g(3, 4)).half();
        let v3 = (g(0, 3) + g(3, 4) - g(0, 4)).half();
        let v4 = (g(0, 4) + g(3, 4) - g(0, 3)).half();
        let second = RowVector::new(vec![v0, g(1, 4) - v4, g(2, 4) - v4, v3, v4]);
        let unperm = |v: &RowVector| RowVector::new(inv.iter().map(|&k| v.values[k]).collect());
        Ok(Decomposition::star(vec![unperm(&first), unperm(&second)]))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Star5Rank {
    pub value: RankValue,
    pub test: Star5Test,
    pub decomposition: Decomposition,
}

pub fn star5_rank(m: &DissimilarityMatrix) -> Result<Star5Rank> {
    need(m.n(), 5)?;
    if let Some(v) = star_generator(m) {
        return Ok(Star5Rank {
            value: RankValue::Finite(1),
            test: star5_rank2_test(m)?,
            decomposition: Decomposition::star(vec![v]),
        });
    }
    let test = star5_rank2_test(m)?;
    let (value, decomposition) = if test.passes {
        (RankValue::Finite(2), star5_rank2_decompose(m)?)
    } else {
        (RankValue::Finite(3), star_upper_decomposition(m)?)
    };
    Ok(Star5Rank {
        value,
        test,
        decomposition,
    })
}

// ---------------------------------------------------------------------------
// 5x5 tree rank

#[derive(Clone, Debug, Serialize)]
pub struct Tree5Rank {
    pub value: RankValue,
    /// A minimizing triangle term of P, when the rank is at most 2.
    pub triangle: Option<PTerm>,
    /// Edges of the five-cycle deficiency graph, when the rank is 3.
    pub five_cycle: Option<Vec<(Pair, Pair)>>,
    pub decomposition: Decomposition,
}

pub fn tree5_rank(m: &DissimilarityMatrix) -> Result<Tree5Rank> {
    need(m.n(), 5)?;
    if is_tree_matrix(m) {
        return Ok(Tree5Rank {
            value: RankValue::Finite(1),
            triangle: None,
            five_cycle: None,
            decomposition: Decomposition::tree(vec![m.clone()]),
        });
    }
    let eval = p_evaluation(m)?;
    let triangle = eval
        .minimizers
        .iter()
        .map(|&k| eval.terms[k])
        .find(|t| matches!(t, PTerm::Triangle { .. }));
    if let Some(t) = triangle {
        let [x, y] = tree5_two_term(m)?.expect("triangle minimizer gives two trees");
        return Ok(Tree5Rank {
            value: RankValue::Finite(2),
            triangle: Some(t),
            five_cycle: None,
            decomposition: Decomposition::tree(vec![x, y]),
        });
    }
    let class = classify_petersen(m)?;
    let five_cycle = (class.class == PetersenClass::FiveCycle).then_some(class.edges);
    Ok(Tree5Rank {
        value: RankValue::Finite(3),
        triangle: None,
        five_cycle,
        decomposition: star_upper_decomposition(m)?.star_as_tree(),
    })
}

/// Two tree matrices summing to `m` when `P` is minimized at a triangle,
/// `None` otherwise.
///
/// With the triangle on `{c, d, e}` and repeated pair `{a, b}`: a tree `T`
/// agreeing with `M` off the triangle, plus the triangle block extended to a
/// tree with large entries elsewhere.
pub fn tree5_two_term(m: &DissimilarityMatrix) -> Result<Option<[DissimilarityMatrix; 2]>> {
    need(m.n(), 5)?;
    let eval = p_evaluation(m)?;
    let Some((tri, ab)) = eval.minimizers.iter().find_map(|&k| match eval.terms[k] {
        PTerm::Triangle { triangle, pair } => Some((triangle, pair)),
        PTerm::Pentagon { .. } => None,
    }) else {
        return Ok(None);
    };
    let target = Matrix::Dissimilarity(m.clone());
    // Relabelings fixing {a,b} and {c,d,e} setwise; the first orientation
    // whose completion is a tree dominating M is used.
    let firsts = [[ab.0, ab.1], [ab.1, ab.0]];
    let thirds = [
        [tri[0], tri[1], tri[2]],
        [tri[0], tri[2], tri[1]],
        [tri[1], tri[0], tri[2]],
        [tri[1], tri[2], tri[0]],
        [tri[2], tri[0], tri[1]],
        [tri[2], tri[1], tri[0]],
    ];
    let mut t: Option<DissimilarityMatrix> = None;
    'outer: for f in firsts {
        for s in thirds {
            let perm = [f[0], f[1], s[0], s[1], s[2]];
            let p = m.permuted(&perm);
            if let Some(cand) = triangle_complement(&p) {
                t = Some(cand.permuted(&inverse(&perm)));
                break 'outer;
            }
        }
    }
    let Some(t) = t else {
        return Err(Error::Verification(
            "no orientation of the triangle term gives a dominating tree".into(),
        ));
    };
    let d = verified(&target, |c| {
        let block = m.principal(&tri);
        let t2 = scatter_tree(&block, &tri, 5, c)?;
        Ok(Decomposition::tree(vec![t.clone(), t2]))
    })?;
    let mats = d.dissimilarity_matrices();
    Ok(Some([mats[0].clone(), mats[1].clone()]))
}

// In labels where the repeated pair is {0,1} and the triangle {2,3,4}:
// keep M on every pair meeting {0,1}, complete the triangle entries.
fn triangle_complement(p: &DissimilarityMatrix) -> Option<DissimilarityMatrix> {
    let g = |i: usize, j: usize| p.get(i, j);
    let t23 = g(1, 3) + g(0, 2) - g(0, 1);
    let t24 = g(1, 4) + g(0, 2) - g(0, 1);
    let t34 = g(0, 4) + g(1, 3) - g(0, 1);
    let t = DissimilarityMatrix::from_fn(5, |i, j| match (i.min(j), i.max(j)) {
        (2, 3) => t23,
        (2, 4) => t24,
        (3, 4) => t34,
        _ => g(i, j),
    });
    (is_tree_matrix(&t) && t.dominates(p)).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_counts() {
        assert_eq!(five_cycles().len(), 12);
        let terms = p_terms();
        assert_eq!(terms.len(), 22);
        for t in &terms {
            let mut count = [0; 5];
            for (i, j) in t.factors() {
                count[i] += 1;
                count[j] += 1;
            }
            assert_eq!(count, [2; 5]);
        }
    }

    #[test]
    fn sym3_proof_shape() {
        let m = SymmetricMatrix::from_ints(&[&[0, 0, 3], &[0, 0, 5], &[3, 5, 0]]).unwrap();
        let r = sym3_rank(&m).unwrap();
        assert_eq!(r.value, RankValue::Finite(2));
        let d = r.decomposition.unwrap();
        assert!(verify(&Matrix::Symmetric(m), &d).ok);
    }

    #[test]
    fn all_ones_off_diagonal_has_rank_three() {
        let m = SymmetricMatrix::from_ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).unwrap();
        assert_eq!(sym3_rank(&m).unwrap().value, RankValue::Finite(3));
    }

    #[test]
    fn five_cycle_matrix() {
        // 0 on the edges of the cycle 0-1-2-3-4, 1 elsewhere
        let m = DissimilarityMatrix::from_fn(5, |i, j| {
            let d = (i as i64 - j as i64).rem_euclid(5);
            Scalar::int(if d == 1 || d == 4 { 0 } else { 1 })
        });
        let r = tree5_rank(&m).unwrap();
        assert_eq!(r.value, RankValue::Finite(3));
        assert!(r.five_cycle.is_some());
        assert!(!star5_rank2_test(&m).unwrap().passes);
    }

    #[test]
    fn min_matrix_has_star_rank_three() {
        let m = DissimilarityMatrix::from_fn(5, |i, j| Scalar::int(i.min(j) as i64 + 1));
        assert!(!star5_rank2_test(&m).unwrap().passes);
    }
}
