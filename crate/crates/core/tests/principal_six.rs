//! A 7x7 matrix whose 6x6 principal submatrices all have tree rank 2 while
//! the matrix itself has tree rank 3, found by the principal-six experiment.

mod common;

use std::collections::{BTreeMap, VecDeque};
use std::time::Duration;

use tropical_rank::experiments::principal_six;
use tropical_rank::io::parse_matrix;
use tropical_rank::rank::exact::{exact_rank, ExactOptions};
use tropical_rank::rank::{Notion, RankValue};
use tropical_rank::{DissimilarityMatrix, Matrix};

const FOUND: &str = "dissimilarity 7
  *  -1  -5   8  -5 -19 -14
 -1   *   2  -2   9 -12  -7
 -5   2   *  -6  -3  -2  -4
  8  -2  -6   *  -7 -20 -15
 -5   9  -3  -7   * -17 -12
-19 -12  -2 -20 -17   *   5
-14  -7  -4 -15 -12   5   *
";

fn found() -> DissimilarityMatrix {
    match parse_matrix(FOUND).unwrap() {
        Matrix::Dissimilarity(d) => d,
        Matrix::Symmetric(_) => unreachable!(),
    }
}

type Pair = (usize, usize);

/// Pairs `ij`, `kl` such that `M_ij + M_kl` is the unique minimum of the
/// three pairings of `{i, j, k, l}`. A tree matrix attaining `M` at both
/// would have a unique minimum itself, so they need different summands.
fn conflicts(m: &DissimilarityMatrix) -> BTreeMap<Pair, Vec<Pair>> {
    let n = m.n();
    let mut adj: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let mut t = [
                        (m.get(a, b) + m.get(c, d), (a, b), (c, d)),
                        (m.get(a, c) + m.get(b, d), (a, c), (b, d)),
                        (m.get(a, d) + m.get(b, c), (a, d), (b, c)),
                    ];
                    t.sort();
                    if t[0].0 < t[1].0 {
                        adj.entry(t[0].1).or_default().push(t[0].2);
                        adj.entry(t[0].2).or_default().push(t[0].1);
                    }
                }
            }
        }
    }
    adj
}

fn two_colorable(adj: &BTreeMap<Pair, Vec<Pair>>) -> bool {
    let mut side: BTreeMap<Pair, bool> = BTreeMap::new();
    for &s in adj.keys() {
        if side.contains_key(&s) {
            continue;
        }
        side.insert(s, false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                match side.get(&y) {
                    None => {
                        side.insert(y, !side[&x]);
                        queue.push_back(y);
                    }
                    Some(&c) if c == side[&x] => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

#[test]
fn whole_matrix_needs_three_trees() {
    let m = found();
    assert!(!two_colorable(&conflicts(&m)));
    let r = exact_rank(&Matrix::Dissimilarity(m), Notion::Tree, &ExactOptions::default()).unwrap();
    assert_eq!(r.value, Some(RankValue::Finite(3)));
}

#[test]
fn every_six_by_six_needs_two() {
    let m = found();
    for drop in 0..7 {
        let idx: Vec<usize> = (0..7).filter(|&i| i != drop).collect();
        let sub = Matrix::Dissimilarity(m.principal(&idx));
        let r = exact_rank(&sub, Notion::Tree, &ExactOptions::default()).unwrap();
        assert_eq!(r.value, Some(RankValue::Finite(2)), "without index {}", drop + 1);
        common::check(&sub, &r.decomposition.unwrap()).unwrap();
    }
}

#[test]
fn experiment_reproduces_it() {
    let r = principal_six(7, 30, 1, Duration::from_secs(10)).unwrap();
    assert_eq!(r.counterexamples.len(), 1);
    assert_eq!(parse_matrix(&r.counterexamples[0]).unwrap(), Matrix::Dissimilarity(found()));
}
