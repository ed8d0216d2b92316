//! Tropical polynomials in the entries of a matrix and the three quadratic
//! tropical bases used for deficiency hypergraphs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DissimilarityMatrix, Matrix, SymmetricMatrix};
use crate::scalar::Scalar;

/// An unordered index pair `{i, j}`, stored with `i <= j`, 0-based.
pub type Pair = (usize, usize);

pub fn pair(i: usize, j: usize) -> Pair {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Anything with entries addressable by unordered pairs.
pub trait Entries {
    fn size(&self) -> usize;
    fn entry(&self, p: Pair) -> Scalar;
}

impl Entries for SymmetricMatrix {
    fn size(&self) -> usize {
        self.n()
    }
    fn entry(&self, p: Pair) -> Scalar {
        self.get(p.0, p.1)
    }
}

impl Entries for DissimilarityMatrix {
    fn size(&self) -> usize {
        self.n()
    }
    fn entry(&self, p: Pair) -> Scalar {
        assert!(p.0 != p.1, "dissimilarity matrices have no diagonal");
        self.get(p.0, p.1)
    }
}

impl Entries for Matrix {
    fn size(&self) -> usize {
        self.n()
    }
    fn entry(&self, p: Pair) -> Scalar {
        match self {
            Matrix::Symmetric(m) => m.entry(p),
            Matrix::Dissimilarity(m) => m.entry(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TropicalMonomial {
    pub coefficient: Scalar,
    /// Sorted by pair, exponents positive.
    pub exponents: Vec<(Pair, u32)>,
}

impl TropicalMonomial {
    pub fn new(coefficient: Scalar, factors: &[Pair]) -> TropicalMonomial {
        let mut exponents: Vec<(Pair, u32)> = Vec::new();
        let mut sorted: Vec<Pair> = factors.iter().map(|&(i, j)| pair(i, j)).collect();
        sorted.sort();
        for p in sorted {
            match exponents.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => exponents.push((p, 1)),
            }
        }
        TropicalMonomial {
            coefficient,
            exponents,
        }
    }

    pub fn product(factors: &[Pair]) -> TropicalMonomial {
        TropicalMonomial::new(Scalar::ZERO, factors)
    }

    pub fn evaluate<E: Entries + ?Sized>(&self, w: &E) -> Scalar {
        self.exponents
            .iter()
            .fold(self.coefficient, |acc, &(p, e)| acc + w.entry(p).times(e as i64))
    }

    /// Positions with nonzero exponent.
    pub fn support(&self) -> Vec<Pair> {
        self.exponents.iter().map(|&(p, _)| p).collect()
    }
}

impl fmt::Display for TropicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coefficient.is_zero() {
            parts.push(self.coefficient.to_string());
        }
        for &((i, j), e) in &self.exponents {
            if e == 1 {
                parts.push(format!("x[{},{}]", i + 1, j + 1));
            } else {
                parts.push(format!("x[{},{}]^{e}", i + 1, j + 1));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TropicalPolynomial {
    pub monomials: Vec<TropicalMonomial>,
}

impl TropicalPolynomial {
    pub fn new(monomials: Vec<TropicalMonomial>) -> Result<TropicalPolynomial> {
        if monomials.len() < 2 {
            return Err(Error::Precondition(
                "a tropical polynomial needs at least two monomials".into(),
            ));
        }
        Ok(TropicalPolynomial { monomials })
    }

    pub fn evaluations<E: Entries + ?Sized>(&self, w: &E) -> Vec<Scalar> {
        self.monomials.iter().map(|m| m.evaluate(w)).collect()
    }
}

impl fmt::Display for TropicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.monomials.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", terms.join(" ⊕ "))
    }
}

/// Result of evaluating a tropical polynomial at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vanishing {
    pub vanishes: bool,
    pub minimum: Scalar,
    /// Indices of the monomials attaining the minimum.
    pub minimizers: Vec<usize>,
}

pub fn minimizers(values: &[Scalar]) -> (Scalar, Vec<usize>) {
    let min = *values.iter().min().expect("no values");
    let idx = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == min)
        .map(|(k, _)| k)
        .collect();
    (min, idx)
}

/// Whether the minimum of `p` at `w` is attained at least twice.
pub fn vanishes_at<E: Entries + ?Sized>(p: &TropicalPolynomial, w: &E) -> Vanishing {
    let (minimum, minimizers) = minimizers(&p.evaluations(w));
    Vanishing {
        vanishes: minimizers.len() >= 2,
        minimum,
        minimizers,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// The 2x2 minors of a symmetric matrix.
    SymmetricMinors,
    /// Binomials `x_ij x_kl ⊕ x_ik x_jl` over distinct indices.
    StarTree,
    /// The three-term Plücker relations.
    Pluecker,
}

impl Basis {
    pub fn from_name(name: &str) -> Result<Basis> {
        match name {
            "symmetric-minors" | "sym" | "minors" => Ok(Basis::SymmetricMinors),
            "star-tree" | "star" => Ok(Basis::StarTree),
            "pluecker" | "plucker" | "tree" => Ok(Basis::Pluecker),
            other => Err(Error::UnknownName(format!("basis {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Basis::SymmetricMinors => "symmetric-minors",
            Basis::StarTree => "star-tree",
            Basis::Pluecker => "pluecker",
        }
    }

    pub fn polynomials(&self, n: usize) -> Vec<TropicalPolynomial> {
        match self {
            Basis::SymmetricMinors => symmetric_minors(n),
            Basis::StarTree => star_tree_basis(n),
            Basis::Pluecker => pluecker_basis(n),
        }
    }
}

/// All distinct 2x2 minors `x_ij x_kl ⊕ x_il x_kj` (rows `{i,k}`, columns
/// `{j,l}`) of a symmetric matrix, dropping those whose two terms coincide.
pub fn symmetric_minors(n: usize) -> Vec<TropicalPolynomial> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    let a = TropicalMonomial::product(&[pair(i, j), pair(k, l)]);
                    let b = TropicalMonomial::product(&[pair(i, l), pair(k, j)]);
                    if a == b {
                        continue;
                    }
                    let key = if a < b { (a, b) } else { (b, a) };
                    if seen.insert(key.clone()) {
                        out.push(TropicalPolynomial {
                            monomials: vec![key.0, key.1],
                        });
                    }
                }
            }
        }
    }
    out
}

/// The three pairings of a quadruple `i < j < k < l`.
pub fn pairings(i: usize, j: usize, k: usize, l: usize) -> [[Pair; 2]; 3] {
    [
        [(i, j), (k, l)],
        [(i, k), (j, l)],
        [(i, l), (j, k)],
    ]
}

pub fn quadruples(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

pub fn star_tree_basis(n: usize) -> Vec<TropicalPolynomial> {
    let mut out = Vec::new();
    for [i, j, k, l] in quadruples(n) {
        let p = pairings(i, j, k, l);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            out.push(TropicalPolynomial {
                monomials: vec![
                    TropicalMonomial::product(&p[a]),
                    TropicalMonomial::product(&p[b]),
                ],
            });
        }
    }
    out
}

pub fn pluecker_basis(n: usize) -> Vec<TropicalPolynomial> {
    quadruples(n)
        .into_iter()
        .map(|[i, j, k, l]| TropicalPolynomial {
            monomials: pairings(i, j, k, l)
                .iter()
                .map(|p| TropicalMonomial::product(p))
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minors_count() {
        // 2x2: only x11 x22 ⊕ x12^2.
        assert_eq!(symmetric_minors(2).len(), 1);
        assert!(symmetric_minors(1).is_empty());
    }

    #[test]
    fn monomial_collects_powers() {
        let m = TropicalMonomial::product(&[(0, 1), (1, 0)]);
        assert_eq!(m.exponents, vec![((0, 1), 2)]);
        assert_eq!(m.to_string(), "x[1,2]^2");
    }

    #[test]
    fn one_term_polynomial_rejected() {
        assert!(TropicalPolynomial::new(vec![TropicalMonomial::product(&[(0, 1)])]).is_err());
    }

    #[test]
    fn basis_names() {
        assert_eq!(Basis::from_name("pluecker").unwrap(), Basis::Pluecker);
        assert!(Basis::from_name("cubic").is_err());
    }
}
