//! Per-class feasibility: given a set `S` of matrix positions, is there a
//! single summand that is `>= M` everywhere and `= M` on `S`?
//!
//! A decomposition of rank `r` is the same thing as a cover of all positions
//! by `r` feasible classes, and feasible classes are closed under subsets.
//!
//! Entries are scaled to integers once; answers are memoized by class mask.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::matrix::{diss_pairs, sym_pairs, DissimilarityMatrix, Matrix, RowVector};
use crate::polynomial::quadruples;
use crate::scalar::Scalar;

use super::fm::{self, Row};
use super::Notion;

pub struct Instance {
    pub notion: Notion,
    pub n: usize,
    pub positions: Vec<(usize, usize)>,
    /// Entries times `scale`, all integral.
    pub values: Vec<i64>,
    pub scale: i128,
    index: Vec<Vec<usize>>,
    memo: RefCell<HashMap<u64, bool>>,
    pub lp_calls: RefCell<u64>,
}

impl Instance {
    pub fn new(m: &Matrix, notion: Notion) -> Result<Instance> {
        notion.check_kind(m)?;
        let n = m.n();
        let (positions, entries): (Vec<(usize, usize)>, &[Scalar]) = match m {
            Matrix::Symmetric(s) => (sym_pairs(n), s.entries()),
            Matrix::Dissimilarity(d) => (diss_pairs(n), d.entries()),
        };
        if positions.len() > 64 {
            return Err(Error::Precondition(format!(
                "exact search supports at most 64 positions, got {}",
                positions.len()
            )));
        }
        let scale = Scalar::common_denominator(entries);
        let mut values = Vec::with_capacity(entries.len());
        for e in entries {
            let v = e.numer() * (scale / e.denom());
            let v = i64::try_from(v)
                .ok()
                .filter(|v| v.abs() < 1 << 40)
                .ok_or_else(|| Error::Precondition(format!("entry {e} is too large for exact search")))?;
            values.push(v);
        }
        let mut index = vec![vec![usize::MAX; n]; n];
        for (k, &(i, j)) in positions.iter().enumerate() {
            index[i][j] = k;
            index[j][i] = k;
        }
        Ok(Instance {
            notion,
            n,
            positions,
            values,
            scale,
            index,
            memo: RefCell::new(HashMap::new()),
            lp_calls: RefCell::new(0),
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, i: usize, j: usize) -> usize {
        self.index[i][j]
    }

    fn value(&self, i: usize, j: usize) -> i64 {
        self.values[self.index[i][j]]
    }

    fn unscale(&self, v: Scalar) -> Scalar {
        v / Scalar::new(self.scale, 1)
    }

    pub fn feasible(&self, mask: u64) -> bool {
        if let Some(&b) = self.memo.borrow().get(&mask) {
            return b;
        }
        let b = match self.notion {
            Notion::Symmetric | Notion::Star => self.vector_solution(mask).is_some(),
            Notion::Tree => self.tree_feasible(mask),
        };
        self.memo.borrow_mut().insert(mask, b);
        b
    }

    /// A generator vector `v` (in the original scale) for a symmetric or
    /// star class.
    pub fn vector_witness(&self, mask: u64) -> Option<RowVector> {
        let v = self.vector_solution(mask)?;
        Some(RowVector::new(v.into_iter().map(|x| self.unscale(x)).collect()))
    }

    /// A tree matrix (in the original scale) for a tree class.
    pub fn tree_witness(&self, mask: u64) -> Option<DissimilarityMatrix> {
        if let Some(v) = self.vector_solution(mask) {
            let v: Vec<Scalar> = v.into_iter().map(|x| self.unscale(x)).collect();
            return Some(DissimilarityMatrix::from_fn(self.n, |i, j| v[i] + v[j]));
        }
        for topo in topologies(self.n).iter() {
            if !self.quartets_allow(topo, mask) {
                continue;
            }
            let rows = self.tree_rows(topo, mask);
            if let Some(w) = fm::solution(topo.edges, &rows) {
                let m = DissimilarityMatrix::from_fn(self.n, |i, j| {
                    let p = topo.paths[self.position(i, j)];
                    let s: Scalar = (0..topo.edges).filter(|e| p >> e & 1 == 1).map(|e| w[e]).sum();
                    self.unscale(s)
                });
                return Some(m);
            }
        }
        None
    }

    // Sum-constraint propagation. Each component of the equality graph is
    // parametrized as v_x = a_x + s_x t with s_x = ±1; odd cycles and loops
    // pin t, and every inequality v_i + v_j >= M_ij becomes a constraint
    // with at most two parameters and unit coefficients, decided by a
    // negative-cycle test on the doubled constraint graph.
    fn vector_solution(&self, mask: u64) -> Option<Vec<Scalar>> {
        let n = self.n;
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        let mut eqs: Vec<(usize, usize, i64)> = Vec::new();
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let m = self.values[k];
                adj[i].push((j, m));
                if i != j {
                    adj[j].push((i, m));
                }
                eqs.push((i, j, m));
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut a = vec![0i64; n];
        let mut s = vec![1i64; n];
        let mut ncomp = 0;
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = ncomp;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &(y, m) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = ncomp;
                        a[y] = m - a[x];
                        s[y] = -s[x];
                        stack.push(y);
                    }
                }
            }
            ncomp += 1;
        }
        // Constraints  c1 * t_A + c2 * t_B >= k, stored as graph edges.
        let nodes = 2 * ncomp;
        let node = |c: usize, sign: i64| 2 * c + usize::from(sign < 0);
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        let mut add = |ci: usize, si: i64, cj: usize, sj: i64, k: i64| -> bool {
            if ci == cj {
                let c = si + sj;
                if c == 0 {
                    return 0 >= k;
                }
                // 2 * sign * t >= k
                let p = node(ci, c.signum());
                edges.push((p, p ^ 1, -k));
            } else {
                let p = node(ci, si);
                let q = node(cj, sj);
                edges.push((p, q ^ 1, -k));
                edges.push((q, p ^ 1, -k));
            }
            true
        };
        for &(i, j, m) in &eqs {
            // equality as two opposite inequalities
            let k = m - a[i] - a[j];
            if !add(comp[i], s[i], comp[j], s[j], k) || !add(comp[i], -s[i], comp[j], -s[j], -k) {
                return None;
            }
        }
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            if mask >> k & 1 == 1 {
                continue;
            }
            if !add(comp[i], s[i], comp[j], s[j], self.values[k] - a[i] - a[j]) {
                return None;
            }
        }
        let dist = bellman_ford(nodes, &edges)?;
        let t: Vec<Scalar> = (0..ncomp)
            .map(|c| Scalar::new((dist[2 * c] - dist[2 * c + 1]) as i128, 2))
            .collect();
        Some(
            (0..n)
                .map(|x| Scalar::int(a[x]) + t[comp[x]].times(s[x]))
                .collect(),
        )
    }

    fn tree_feasible(&self, mask: u64) -> bool {
        if self.n <= 3 || self.vector_solution(mask).is_some() {
            return true;
        }
        for topo in topologies(self.n).iter() {
            if !self.quartets_allow(topo, mask) {
                continue;
            }
            *self.lp_calls.borrow_mut() += 1;
            if fm::feasible(topo.edges, &self.tree_rows(topo, mask)) {
                return true;
            }
        }
        false
    }

    // In a tree metric with quartet split ij|kl the two crossing pairings
    // have equal sums, no larger than the split pairing. Checked against the
    // entries fixed by the class before any linear program is set up.
    fn quartets_allow(&self, topo: &Topology, mask: u64) -> bool {
        let fixed = |i: usize, j: usize| mask >> self.position(i, j) & 1 == 1;
        for (q, &[i, j, k, l]) in topo.quads.iter().zip(quad_list(self.n).iter()) {
            let pairs = [[(i, j), (k, l)], [(i, k), (j, l)], [(i, l), (j, k)]];
            let split = pairs[*q as usize];
            let cross: Vec<[(usize, usize); 2]> =
                (0..3).filter(|&p| p != *q as usize).map(|p| pairs[p]).collect();
            let val = |p: [(usize, usize); 2]| self.value(p[0].0, p[0].1) + self.value(p[1].0, p[1].1);
            let full = |p: [(usize, usize); 2]| fixed(p[0].0, p[0].1) && fixed(p[1].0, p[1].1);
            let (c0, c1) = (cross[0], cross[1]);
            if full(c0) && val(c0) < val(c1) || full(c1) && val(c1) < val(c0) {
                return false;
            }
            if full(split) && (val(split) < val(c0) || val(split) < val(c1)) {
                return false;
            }
        }
        true
    }

    fn tree_rows(&self, topo: &Topology, mask: u64) -> Vec<Row> {
        let mut rows = Vec::with_capacity(self.len() + topo.edges);
        for (k, &p) in topo.paths.iter().enumerate() {
            let coeffs: Vec<i64> = (0..topo.edges).map(|e| (p >> e & 1) as i64).collect();
            if mask >> k & 1 == 1 {
                rows.push(Row::eq(coeffs, self.values[k]));
            } else {
                rows.push(Row::ge(coeffs, self.values[k]));
            }
        }
        for e in self.n..topo.edges {
            let mut coeffs = vec![0; topo.edges];
            coeffs[e] = -1;
            rows.push(Row::ge(coeffs, 0));
        }
        rows
    }
}

/// Shortest distances from a virtual source joined to every node, or `None`
/// on a negative cycle.
fn bellman_ford(nodes: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<i64>> {
    let mut d = vec![0i64; nodes];
    for _ in 0..=nodes {
        let mut changed = false;
        for &(u, v, w) in edges {
            if d[u] + w < d[v] {
                d[v] = d[u] + w;
                changed = true;
            }
        }
        if !changed {
            return Some(d);
        }
    }
    None
}

/// An unrooted binary tree on leaves `0..n`: edge `i < n` is the pendant edge
/// of leaf `i`, the rest are internal.
pub struct Topology {
    pub edges: usize,
    /// Path edge mask per dissimilarity position, in pair order.
    pub paths: Vec<u32>,
    /// Quartet split per quadruple (index into the three pairings).
    pub quads: Vec<u8>,
}

fn quad_list(n: usize) -> Arc<Vec<[usize; 4]>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<[usize; 4]>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::new(quadruples(n)))
        .clone()
}

/// All `(2n-5)!!` unrooted binary topologies, cached per `n`.
pub fn topologies(n: usize) -> Arc<Vec<Topology>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Topology>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let t = Arc::new(build_topologies(n));
    cache.lock().unwrap().insert(n, t.clone());
    t
}

// Vertices 0..n are leaves, n.. internal. Leaves are inserted one at a time
// on every edge of every smaller tree.
fn build_topologies(n: usize) -> Vec<Topology> {
    assert!((3..=12).contains(&n), "topology enumeration needs 3 <= n <= 12");
    let mut trees: Vec<Vec<(usize, usize)>> = vec![vec![(0, n), (1, n), (2, n)]];
    for leaf in 3..n {
        let mut next = Vec::new();
        for t in &trees {
            let fresh = n + leaf - 2;
            for k in 0..t.len() {
                let (u, v) = t[k];
                let mut e = t.clone();
                e[k] = (u, fresh);
                e.push((fresh, v));
                e.push((leaf, fresh));
                next.push(e);
            }
        }
        trees = next;
    }
    let quads = quadruples(n);
    trees
        .into_iter()
        .map(|edges| {
            // Number pendant edges by their leaf, internal edges after.
            let mut ids = vec![0usize; edges.len()];
            let mut next_internal = n;
            for (k, &(u, v)) in edges.iter().enumerate() {
                let leaf = [u, v].into_iter().find(|&x| x < n);
                ids[k] = match leaf {
                    Some(l) => l,
                    None => {
                        next_internal += 1;
                        next_internal - 1
                    }
                };
            }
            let nv = 2 * n - 2;
            let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
            for (k, &(u, v)) in edges.iter().enumerate() {
                adj[u].push((v, ids[k]));
                adj[v].push((u, ids[k]));
            }
            let mut from_leaf: Vec<Vec<u32>> = Vec::with_capacity(n);
            for l in 0..n {
                let mut mask = vec![u32::MAX; nv];
                mask[l] = 0;
                let mut stack = vec![l];
                while let Some(x) = stack.pop() {
                    for &(y, e) in &adj[x] {
                        if mask[y] == u32::MAX {
                            mask[y] = mask[x] | 1 << e;
                            stack.push(y);
                        }
                    }
                }
                from_leaf.push(mask);
            }
            let paths: Vec<u32> = diss_pairs(n)
                .into_iter()
                .map(|(i, j)| from_leaf[i][j])
                .collect();
            let qs = quads
                .iter()
                .map(|&[i, j, k, l]| {
                    let disjoint = |a: u32, b: u32| a & b == 0;
                    if disjoint(from_leaf[i][j], from_leaf[k][l]) {
                        0
                    } else if disjoint(from_leaf[i][k], from_leaf[j][l]) {
                        1
                    } else {
                        2
                    }
                })
                .collect();
            Topology {
                edges: edges.len(),
                paths,
                quads: qs,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{DissimilarityMatrix, SymmetricMatrix};

    #[test]
    fn topology_counts() {
        assert_eq!(topologies(3).len(), 1);
        assert_eq!(topologies(4).len(), 3);
        assert_eq!(topologies(5).len(), 15);
        assert_eq!(topologies(6).len(), 105);
        for t in topologies(6).iter() {
            assert_eq!(t.edges, 9);
        }
    }

    #[test]
    fn full_class_of_rank_one_is_feasible() {
        let v = RowVector::from_ints(&[1, -2, 3, 0]);
        let m = crate::matrix::rank_one_symmetric(&v);
        let inst = Instance::new(&Matrix::Symmetric(m), Notion::Symmetric).unwrap();
        let all = (1u64 << inst.len()) - 1;
        assert!(inst.feasible(all));
        assert_eq!(inst.vector_witness(all).unwrap(), v);
    }

    #[test]
    fn odd_cycle_pins_parameter() {
        // v1+v2 = 0, v2+v3 = 0, v1+v3 = 1  =>  v = (1/2, -1/2, 1/2)
        let m = DissimilarityMatrix::from_ints(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]).unwrap();
        let inst = Instance::new(&Matrix::Dissimilarity(m), Notion::Star).unwrap();
        let all = (1u64 << inst.len()) - 1;
        let v = inst.vector_witness(all).unwrap();
        assert_eq!(v.values, vec![Scalar::new(1, 2), Scalar::new(-1, 2), Scalar::new(1, 2)]);
    }

    #[test]
    fn diagonal_obstruction_is_infeasible() {
        let m = SymmetricMatrix::from_ints(&[&[0, -1], &[-1, 0]]).unwrap();
        let inst = Instance::new(&Matrix::Symmetric(m), Notion::Symmetric).unwrap();
        let off = 1u64 << inst.position(0, 1);
        assert!(!inst.feasible(off));
    }

    #[test]
    fn tree_metric_is_one_class() {
        // quartet 12|34 with internal edge -2
        let m = DissimilarityMatrix::from_ints(&[
            &[0, 2, 0, 0],
            &[2, 0, 0, 0],
            &[0, 0, 0, 2],
            &[0, 0, 2, 0],
        ])
        .unwrap();
        let inst = Instance::new(&Matrix::Dissimilarity(m.clone()), Notion::Tree).unwrap();
        let all = (1u64 << inst.len()) - 1;
        assert!(inst.feasible(all));
        assert_eq!(inst.tree_witness(all).unwrap(), m);
        let star = Instance::new(&Matrix::Dissimilarity(m), Notion::Star).unwrap();
        assert!(!star.feasible(all));
    }
}
