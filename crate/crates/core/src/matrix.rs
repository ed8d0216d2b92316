//! Symmetric and dissimilarity matrices over the min-plus semiring.
//!
//! Both kinds store one value per unordered pair. Internally indices are
//! 0-based; all text I/O is 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Index of the pair `{i, j}` (with `i <= j`) among the `n(n+1)/2` pairs of a
/// symmetric matrix, in lexicographic order.
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Index of the pair `{i, j}` (with `i != j`) among the `n(n-1)/2` pairs of a
/// dissimilarity matrix, in lexicographic order.
pub fn diss_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j);
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

pub fn diss_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowVector {
    pub values: Vec<Scalar>,
}

impl RowVector {
    pub fn new(values: Vec<Scalar>) -> RowVector {
        RowVector { values }
    }

    pub fn from_ints(values: &[i64]) -> RowVector {
        RowVector::new(values.iter().map(|&v| Scalar::int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<Scalar> {
        self.values.iter().copied().min()
    }

    pub fn add_constant(&self, c: Scalar) -> RowVector {
        RowVector::new(self.values.iter().map(|&v| v + c).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DissimilarityMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

/// Either kind of matrix, for interfaces that accept both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Matrix {
    Symmetric(SymmetricMatrix),
    Dissimilarity(DissimilarityMatrix),
}

fn check_rows(rows: &[Vec<Scalar>]) -> Result<usize> {
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
    }
    Ok(n)
}

impl SymmetricMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> SymmetricMatrix {
        assert!(n >= 1, "symmetric matrix needs n >= 1");
        let entries = sym_pairs(n).into_iter().map(|(i, j)| f(i, j)).collect();
        SymmetricMatrix { n, entries }
    }

    /// Build from the upper triangle in pair order (see [`sym_pairs`]).
    pub fn from_entries(n: usize, entries: Vec<Scalar>) -> Result<SymmetricMatrix> {
        if n == 0 || entries.len() != n * (n + 1) / 2 {
            return Err(Error::Dimension(format!(
                "{} entries do not fill a symmetric {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(SymmetricMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<SymmetricMatrix> {
        let n = check_rows(rows)?;
        if n == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Parse(format!(
                        "matrix is not symmetric at ({}, {})",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(SymmetricMatrix::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<SymmetricMatrix> {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
            .collect();
        SymmetricMatrix::from_rows(&rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[sym_index(self.n, i, j)]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        sym_pairs(self.n)
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn with_entry(&self, i: usize, j: usize, v: Scalar) -> SymmetricMatrix {
        let mut out = self.clone();
        out.entries[sym_index(self.n, i, j)] = v;
        out
    }

    /// Simultaneous row/column relabeling: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> SymmetricMatrix {
        assert_eq!(perm.len(), self.n);
        SymmetricMatrix::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn principal(&self, idx: &[usize]) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    pub fn max_abs(&self) -> Scalar {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(Scalar::ZERO)
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || *e == Scalar::ONE)
    }

    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> SymmetricMatrix {
        SymmetricMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn trop_sum(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "cannot add {0}x{0} and {1}x{1} matrices",
                self.n, other.n
            )));
        }
        Ok(SymmetricMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| Scalar::min(*a, *b))
                .collect(),
        })
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &SymmetricMatrix) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a >= b)
    }
}

impl DissimilarityMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> DissimilarityMatrix {
        assert!(n >= 2, "dissimilarity matrix needs n >= 2");
        let entries = diss_pairs(n).into_iter().map(|(i, j)| f(i, j)).collect();
        DissimilarityMatrix { n, entries }
    }

    pub fn from_entries(n: usize, entries: Vec<Scalar>) -> Result<DissimilarityMatrix> {
        if n < 2 || entries.len() != n * (n - 1) / 2 {
            return Err(Error::Dimension(format!(
                "{} entries do not fill a {n}x{n} dissimilarity matrix",
                entries.len()
            )));
        }
        Ok(DissimilarityMatrix { n, entries })
    }

    /// Build from full rows; diagonal values are ignored.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<DissimilarityMatrix> {
        let n = check_rows(rows)?;
        if n < 2 {
            return Err(Error::Dimension(format!("dissimilarity matrix of size {n}")));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Parse(format!(
                        "matrix is not symmetric at ({}, {})",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(DissimilarityMatrix::from_fn(n, |i, j| rows[i][j]))
    }

    /// Build from full integer rows; the diagonal is ignored.
    pub fn from_ints(rows: &[&[i64]]) -> Result<DissimilarityMatrix> {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
            .collect();
        DissimilarityMatrix::from_rows(&rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[diss_index(self.n, i, j)]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        diss_pairs(self.n)
    }

    pub fn with_entry(&self, i: usize, j: usize, v: Scalar) -> DissimilarityMatrix {
        let mut out = self.clone();
        out.entries[diss_index(self.n, i, j)] = v;
        out
    }

    pub fn permuted(&self, perm: &[usize]) -> DissimilarityMatrix {
        assert_eq!(perm.len(), self.n);
        DissimilarityMatrix::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn principal(&self, idx: &[usize]) -> DissimilarityMatrix {
        DissimilarityMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    pub fn max_abs(&self) -> Scalar {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(Scalar::ZERO)
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || *e == Scalar::ONE)
    }

    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> DissimilarityMatrix {
        DissimilarityMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn trop_sum(&self, other: &DissimilarityMatrix) -> Result<DissimilarityMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "cannot add {0}x{0} and {1}x{1} matrices",
                self.n, other.n
            )));
        }
        Ok(DissimilarityMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| Scalar::min(*a, *b))
                .collect(),
        })
    }

    pub fn dominates(&self, other: &DissimilarityMatrix) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a >= b)
    }
}

impl Matrix {
    pub fn n(&self) -> usize {
        match self {
            Matrix::Symmetric(m) => m.n(),
            Matrix::Dissimilarity(m) => m.n(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Matrix::Symmetric(_) => "symmetric",
            Matrix::Dissimilarity(_) => "dissimilarity",
        }
    }
}

impl From<SymmetricMatrix> for Matrix {
    fn from(m: SymmetricMatrix) -> Matrix {
        Matrix::Symmetric(m)
    }
}

impl From<DissimilarityMatrix> for Matrix {
    fn from(m: DissimilarityMatrix) -> Matrix {
        Matrix::Dissimilarity(m)
    }
}

/// Tropical sum of two matrices of the same kind and size.
pub fn trop_sum(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    match (a, b) {
        (Matrix::Symmetric(x), Matrix::Symmetric(y)) => x.trop_sum(y).map(Matrix::Symmetric),
        (Matrix::Dissimilarity(x), Matrix::Dissimilarity(y)) => {
            x.trop_sum(y).map(Matrix::Dissimilarity)
        }
        _ => Err(Error::Dimension(
            "cannot add a symmetric and a dissimilarity matrix".into(),
        )),
    }
}

/// The matrix `v^T ⊙ v`, with entry `{i, j}` equal to `v_i + v_j`.
pub fn rank_one_symmetric(v: &RowVector) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(v.len(), |i, j| v.values[i] + v.values[j])
}

/// The star tree matrix `π(v^T ⊙ v)`.
pub fn star_tree_matrix(v: &RowVector) -> DissimilarityMatrix {
    DissimilarityMatrix::from_fn(v.len(), |i, j| v.values[i] + v.values[j])
}

/// Drop the diagonal.
pub fn project(m: &SymmetricMatrix) -> Result<DissimilarityMatrix> {
    if m.n() < 3 {
        return Err(Error::Precondition(format!(
            "projection needs n >= 3, got {}",
            m.n()
        )));
    }
    Ok(DissimilarityMatrix::from_fn(m.n(), |i, j| m.get(i, j)))
}

/// Generator `v` with `M = v^T ⊙ v`, if `M` has rank one.
pub fn rank_one_generator(m: &SymmetricMatrix) -> Option<RowVector> {
    let v = RowVector::new((0..m.n()).map(|i| m.get(i, i).half()).collect());
    (rank_one_symmetric(&v) == *m).then_some(v)
}

/// Generator `v` with `M = π(v^T ⊙ v)`, if `M` is a star tree matrix.
///
/// For `n = 2` the split of the single entry is not unique; it is halved.
pub fn star_generator(m: &DissimilarityMatrix) -> Option<RowVector> {
    let n = m.n();
    let v = if n == 2 {
        let h = m.get(0, 1).half();
        RowVector::new(vec![h, h])
    } else {
        RowVector::new(
            (0..n)
                .map(|i| {
                    let j = (i + 1) % n;
                    let k = (i + 2) % n;
                    (m.get(i, j) + m.get(i, k) - m.get(j, k)).half()
                })
                .collect(),
        )
    };
    (star_tree_matrix(&v) == *m).then_some(v)
}

/// Pad a rank-one generator to length `n` so that every new entry of
/// `v^T ⊙ v` is at least `c`.
pub fn extend_generator(v: &RowVector, n: usize, c: Scalar) -> RowVector {
    assert!(n >= v.len());
    let pad = match v.min() {
        Some(lo) => c.half().max(c - lo),
        None => c.half(),
    };
    let mut values = v.values.clone();
    values.resize(n, pad);
    RowVector::new(values)
}

/// Extend a rank-one symmetric matrix to size `n`, keeping it as the upper
/// left block and making all new entries at least `c`.
pub fn extend_rank_one(m: &SymmetricMatrix, n: usize, c: Scalar) -> Result<(SymmetricMatrix, RowVector)> {
    if n < m.n() {
        return Err(Error::Dimension(format!("cannot extend {} to {n}", m.n())));
    }
    let v = rank_one_generator(m)
        .ok_or_else(|| Error::Precondition("matrix does not have rank one".into()))?;
    let w = extend_generator(&v, n, c);
    Ok((rank_one_symmetric(&w), w))
}

/// Star tree analogue of [`extend_rank_one`].
pub fn extend_star_tree(
    m: &DissimilarityMatrix,
    n: usize,
    c: Scalar,
) -> Result<(DissimilarityMatrix, RowVector)> {
    if n < m.n() {
        return Err(Error::Dimension(format!("cannot extend {} to {n}", m.n())));
    }
    let v = star_generator(m)
        .ok_or_else(|| Error::Precondition("matrix is not a star tree matrix".into()))?;
    let w = extend_generator(&v, n, c);
    Ok((star_tree_matrix(&w), w))
}

/// Place a generator defined on the indices `idx` into a length-`n` vector,
/// padding the remaining coordinates so every entry touching them is `>= c`.
pub fn scatter_generator(v: &RowVector, idx: &[usize], n: usize, c: Scalar) -> RowVector {
    let ext = extend_generator(v, n, c);
    let pad = ext.values.get(v.len()).copied().unwrap_or(c);
    let mut out = vec![pad; n];
    for (k, &i) in idx.iter().enumerate() {
        out[i] = v.values[k];
    }
    RowVector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }

    #[test]
    fn index_functions_enumerate_in_order() {
        for n in 1..8 {
            for (k, (i, j)) in sym_pairs(n).into_iter().enumerate() {
                assert_eq!(sym_index(n, i, j), k);
                assert_eq!(sym_index(n, j, i), k);
            }
            for (k, (i, j)) in diss_pairs(n).into_iter().enumerate() {
                assert_eq!(diss_index(n, i, j), k);
                assert_eq!(diss_index(n, j, i), k);
            }
        }
    }

    #[test]
    fn rank_one_expansion() {
        let m = rank_one_symmetric(&RowVector::from_ints(&[0, 1]));
        assert_eq!(m.rows(), vec![vec![s(0), s(1)], vec![s(1), s(2)]]);
        let z = rank_one_symmetric(&RowVector::from_ints(&[0, 0, 0]));
        assert!(z.entries().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn extend_rank_one_small() {
        let m = SymmetricMatrix::from_ints(&[&[0]]).unwrap();
        let (e, w) = extend_rank_one(&m, 2, s(10)).unwrap();
        assert_eq!(w, RowVector::from_ints(&[0, 10]));
        assert_eq!(e.rows(), vec![vec![s(0), s(10)], vec![s(10), s(20)]]);
    }

    #[test]
    fn star_generator_recovers_vector() {
        let v = RowVector::from_ints(&[3, -1, 4, 1, 5]);
        let m = star_tree_matrix(&v);
        assert_eq!(star_generator(&m), Some(v));
        let bad = m.with_entry(0, 1, s(100));
        assert_eq!(star_generator(&bad), None);
    }

    #[test]
    fn extend_star_tree_bounds() {
        let m = DissimilarityMatrix::from_ints(&[&[0, 1, 5], &[1, 0, 2], &[5, 2, 0]]).unwrap();
        let (e, _) = extend_star_tree(&m, 5, s(9)).unwrap();
        assert_eq!(e.principal(&[0, 1, 2]), m);
        for i in 0..5 {
            for j in i + 1..5 {
                if j >= 3 {
                    assert!(e.get(i, j) >= s(9));
                }
            }
        }
    }

    #[test]
    fn trop_sum_dimension_mismatch() {
        let a = SymmetricMatrix::from_ints(&[&[0]]).unwrap();
        let b = SymmetricMatrix::from_ints(&[&[0, 0], &[0, 0]]).unwrap();
        assert!(a.trop_sum(&b).is_err());
    }
}
