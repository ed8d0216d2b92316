//! Checks written from the definitions alone, sharing no code with the
//! library's own membership tests and verifier.

#![allow(dead_code)]

use tropical_rank::rank::{Decomposition, Notion};
use tropical_rank::{DissimilarityMatrix, Matrix, Scalar, SymmetricMatrix};

/// Min of the three pairings attained at least twice, for every 4-set.
pub fn four_point(m: &DissimilarityMatrix) -> bool {
    let n = m.n();
    let e = |i, j| m.get(i, j);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let mut s = [e(a, b) + e(c, d), e(a, c) + e(b, d), e(a, d) + e(b, c)];
                    s.sort();
                    if s[0] != s[1] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `M = v^T ⊙ v` forces `v_i = M_ii / 2`.
pub fn rank_one(m: &SymmetricMatrix) -> bool {
    let n = m.n();
    let v: Vec<Scalar> = (0..n).map(|i| m.get(i, i).half()).collect();
    (0..n).all(|i| (0..n).all(|j| m.get(i, j) == v[i] + v[j]))
}

/// `M = π(v^T ⊙ v)`: for `n >= 3` the generator is determined by
/// `v_i = (M_ij + M_ik - M_jk) / 2`.
pub fn star(m: &DissimilarityMatrix) -> bool {
    let n = m.n();
    if n <= 3 {
        return true;
    }
    let v: Vec<Scalar> = (0..n)
        .map(|i| {
            let others: Vec<usize> = (0..n).filter(|&x| x != i).take(2).collect();
            let (j, k) = (others[0], others[1]);
            (m.get(i, j) + m.get(i, k) - m.get(j, k)).half()
        })
        .collect();
    (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j) == v[i] + v[j]))
}

fn entries(m: &Matrix) -> Vec<(usize, usize, Scalar)> {
    let n = m.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            match m {
                Matrix::Symmetric(s) => out.push((i, j, s.get(i, j))),
                Matrix::Dissimilarity(d) if i != j => out.push((i, j, d.get(i, j))),
                Matrix::Dissimilarity(_) => {}
            }
        }
    }
    out
}

/// Every summand lies in the variety of `d.notion` and the entrywise
/// minimum of the summands is `m`.
pub fn check(m: &Matrix, d: &Decomposition) -> Result<(), String> {
    if d.summands.is_empty() {
        return Err("no summands".into());
    }
    for (k, s) in d.summands.iter().enumerate() {
        let ok = match (d.notion, &s.matrix) {
            (Notion::Symmetric, Matrix::Symmetric(x)) => rank_one(x),
            (Notion::Star, Matrix::Dissimilarity(x)) => star(x),
            (Notion::Tree, Matrix::Dissimilarity(x)) => four_point(x),
            _ => false,
        };
        if !ok || s.matrix.n() != m.n() {
            return Err(format!("summand {k} is not in the variety"));
        }
    }
    let want = entries(m);
    for (idx, &(i, j, v)) in want.iter().enumerate() {
        let min = d
            .summands
            .iter()
            .map(|s| entries(&s.matrix)[idx].2)
            .min()
            .unwrap();
        if min != v {
            return Err(format!("entry ({i},{j}): want {v}, minimum is {min}"));
        }
    }
    Ok(())
}

/// Leaf distances of a Newick string whose leaves are labelled `1..=n`.
pub fn newick_distances(s: &str, n: usize) -> DissimilarityMatrix {
    // Adjacency list built while parsing; vertex 0 is the root.
    struct P<'a> {
        s: &'a [u8],
        pos: usize,
        adj: Vec<Vec<(usize, Scalar)>>,
        leaf: Vec<Option<usize>>,
    }
    impl P<'_> {
        fn node(&mut self) -> usize {
            let id = self.adj.len();
            self.adj.push(Vec::new());
            self.leaf.push(None);
            if self.s[self.pos] == b'(' {
                self.pos += 1;
                loop {
                    let child = self.node();
                    let w = self.length();
                    self.adj[id].push((child, w));
                    self.adj[child].push((id, w));
                    match self.s[self.pos] {
                        b',' => self.pos += 1,
                        b')' => {
                            self.pos += 1;
                            break;
                        }
                        c => panic!("unexpected {:?}", c as char),
                    }
                }
            } else {
                let start = self.pos;
                while self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let label: usize = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
                self.leaf[id] = Some(label - 1);
            }
            id
        }
        fn length(&mut self) -> Scalar {
            assert_eq!(self.s[self.pos], b':');
            self.pos += 1;
            let start = self.pos;
            while !matches!(self.s[self.pos], b',' | b')' | b';') {
                self.pos += 1;
            }
            std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap()
        }
    }
    let mut p = P {
        s: s.trim().as_bytes(),
        pos: 0,
        adj: Vec::new(),
        leaf: Vec::new(),
    };
    p.node();
    let mut at = vec![0; n];
    for (v, l) in p.leaf.iter().enumerate() {
        if let Some(l) = l {
            at[*l] = v;
        }
    }
    let dist_from = |start: usize| {
        let mut d = vec![None; p.adj.len()];
        d[start] = Some(Scalar::int(0));
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, w) in &p.adj[x] {
                if d[y].is_none() {
                    d[y] = Some(d[x].unwrap() + w);
                    stack.push(y);
                }
            }
        }
        d
    };
    let rows: Vec<Vec<Option<Scalar>>> = (0..n).map(|i| dist_from(at[i])).collect();
    DissimilarityMatrix::from_fn(n, |i, j| rows[i][at[j]].unwrap())
}
