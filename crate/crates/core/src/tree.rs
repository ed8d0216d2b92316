//! Weighted trees realizing tree matrices.
//!
//! A tree matrix is the leaf distance matrix of a tree whose internal edges
//! have weight `<= 0`. Pendant edges may have any weight.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{extend_star_tree, DissimilarityMatrix, RowVector};
use crate::membership::first_four_point_violation;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Scalar,
}

/// Vertices `0..leaves` are the leaves (leaf `i` is label `i + 1` in text
/// output); the remaining vertices are internal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedTree {
    pub leaves: usize,
    pub vertices: usize,
    pub edges: Vec<Edge>,
}

impl WeightedTree {
    fn adjacency(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        adj
    }

    /// Distances from `start` to every vertex.
    pub fn distances_from(&self, start: usize) -> Vec<Scalar> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.vertices];
        dist[start] = Some(Scalar::ZERO);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &(y, w) in &adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + w);
                    queue.push_back(y);
                }
            }
        }
        dist.into_iter()
            .map(|d| d.expect("tree is disconnected"))
            .collect()
    }

    pub fn leaf_distances(&self) -> DissimilarityMatrix {
        let rows: Vec<Vec<Scalar>> = (0..self.leaves).map(|i| self.distances_from(i)).collect();
        DissimilarityMatrix::from_fn(self.leaves, |i, j| rows[i][j])
    }

    pub fn is_internal_edge(&self, e: &Edge) -> bool {
        e.u >= self.leaves && e.v >= self.leaves
    }

    /// Structural invariants: connected and acyclic, leaves of degree one,
    /// internal edges nonpositive.
    pub fn check(&self) -> Result<()> {
        if self.edges.len() + 1 != self.vertices {
            return Err(Error::Precondition("edge count does not match a tree".into()));
        }
        let adj = self.adjacency();
        for (x, nbrs) in adj.iter().enumerate().take(self.leaves) {
            if nbrs.len() != 1 {
                return Err(Error::Precondition(format!(
                    "leaf {} has degree {}",
                    x + 1,
                    nbrs.len()
                )));
            }
        }
        // Connectivity (with the edge count, implies acyclic).
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Precondition("tree is disconnected".into()));
        }
        if let Some(e) = self
            .edges
            .iter()
            .find(|e| self.is_internal_edge(e) && e.weight > Scalar::ZERO)
        {
            return Err(Error::Precondition(format!(
                "internal edge has positive weight {}",
                e.weight
            )));
        }
        Ok(())
    }

    /// Newick string rooted at the first internal vertex (or at leaf 1's
    /// neighbor for trees with a single edge).
    pub fn to_newick(&self) -> String {
        let adj = self.adjacency();
        let root = if self.vertices > self.leaves {
            self.leaves
        } else {
            0
        };
        fn render(
            tree: &WeightedTree,
            adj: &[Vec<(usize, Scalar)>],
            x: usize,
            parent: Option<usize>,
        ) -> String {
            let children: Vec<String> = adj[x]
                .iter()
                .filter(|(y, _)| Some(*y) != parent)
                .map(|&(y, w)| {
                    format!("{}:{}", render(tree, adj, y, Some(x)), w.to_decimal_string())
                })
                .collect();
            let label = if x < tree.leaves {
                (x + 1).to_string()
            } else {
                String::new()
            };
            if children.is_empty() {
                label
            } else {
                format!("({}){}", children.join(","), label)
            }
        }
        format!("{};", render(self, &adj, root, None))
    }

    /// Lowest-numbered internal vertex.
    fn internal_vertex(&self) -> Option<usize> {
        (self.leaves < self.vertices).then_some(self.leaves)
    }
}

/// Working tree in the positive metric `D = 2A - M`.
struct Builder {
    adj: Vec<Vec<(usize, Scalar)>>,
}

impl Builder {
    fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn link(&mut self, a: usize, b: usize, w: Scalar) {
        self.adj[a].push((b, w));
        self.adj[b].push((a, w));
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|(x, _)| *x != b);
        self.adj[b].retain(|(x, _)| *x != a);
    }

    fn weight(&self, a: usize, b: usize) -> Scalar {
        self.adj[a].iter().find(|(x, _)| *x == b).expect("not adjacent").1
    }

    /// Vertices on the path from `from` to `to`, inclusive.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.adj.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &(y, _) in &self.adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut out = vec![to];
        let mut x = to;
        while x != from {
            x = prev[x];
            out.push(x);
        }
        out.reverse();
        out
    }

    /// Attach `leaf` with pendant length `h` at distance `a` from `from` along
    /// the path to `to`.
    fn attach(&mut self, from: usize, to: usize, a: Scalar, leaf: usize, h: Scalar) -> Result<()> {
        let path = self.path(from, to);
        let mut walked = Scalar::ZERO;
        for k in 0..path.len() - 1 {
            let (x, y) = (path[k], path[k + 1]);
            let w = self.weight(x, y);
            if walked == a {
                self.link(x, leaf, h);
                return Ok(());
            }
            if walked + w > a {
                let mid = self.add_vertex();
                self.unlink(x, y);
                self.link(x, mid, a - walked);
                self.link(mid, y, walked + w - a);
                self.link(mid, leaf, h);
                return Ok(());
            }
            walked += w;
        }
        Err(Error::Precondition(
            "attachment point falls on a leaf; input is not a tree metric".into(),
        ))
    }
}

/// Realize a tree matrix as a weighted tree by leaf insertion.
///
/// Leaf `k` hangs off the path between the pair `(i, j)` of earlier leaves
/// minimizing its Gromov product, at the offset given by the three-point
/// formula. Zero-weight internal edges are contracted.
pub fn realize_tree(m: &DissimilarityMatrix) -> Result<WeightedTree> {
    if let Some(q) = first_four_point_violation(m) {
        return Err(Error::Precondition(format!(
            "not a tree matrix: four-point condition fails on {{{},{},{},{}}}",
            q[0] + 1,
            q[1] + 1,
            q[2] + 1,
            q[3] + 1
        )));
    }
    let n = m.n();
    if n == 2 {
        let h = m.get(0, 1).half();
        return Ok(star_tree(&RowVector::new(vec![h, h])));
    }
    let big = m.max_abs().times(2) + Scalar::ONE;
    let d = |i: usize, j: usize| big.times(2) - m.get(i, j);

    let mut b = Builder {
        adj: vec![Vec::new(); n],
    };
    let c = b.add_vertex();
    b.link(0, c, d(0, 1).half());
    b.link(1, c, d(0, 1).half());
    for k in 2..n {
        let mut best: Option<(Scalar, usize, usize)> = None;
        for i in 0..k {
            for j in i + 1..k {
                let h = (d(i, k) + d(j, k) - d(i, j)).half();
                if best.map_or(true, |(bh, _, _)| h < bh) {
                    best = Some((h, i, j));
                }
            }
        }
        let (h, i, j) = best.unwrap();
        let a = (d(i, k) + d(i, j) - d(j, k)).half();
        b.attach(i, j, a, k, h)?;
    }

    // Contract zero-length internal edges and suppress degree-two vertices.
    loop {
        let mut changed = false;
        for x in n..b.adj.len() {
            if b.adj[x].is_empty() {
                continue;
            }
            if let Some(&(y, _)) = b.adj[x].iter().find(|&&(y, w)| y >= n && w.is_zero()) {
                let moved: Vec<(usize, Scalar)> =
                    b.adj[y].iter().copied().filter(|&(z, _)| z != x).collect();
                b.unlink(x, y);
                for (z, w) in moved {
                    b.unlink(y, z);
                    b.link(x, z, w);
                }
                changed = true;
                break;
            }
            if b.adj[x].len() == 2 {
                let (p, wp) = b.adj[x][0];
                let (q, wq) = b.adj[x][1];
                b.unlink(x, p);
                b.unlink(x, q);
                b.link(p, q, wp + wq);
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }

    // Renumber surviving internal vertices and convert weights back.
    let mut index = vec![usize::MAX; b.adj.len()];
    let mut next = n;
    for (x, slot) in index.iter_mut().enumerate() {
        if x < n {
            *slot = x;
        } else if !b.adj[x].is_empty() {
            *slot = next;
            next += 1;
        }
    }
    let mut edges = Vec::new();
    for x in 0..b.adj.len() {
        for &(y, w) in &b.adj[x] {
            if x < y {
                let weight = if x < n || y < n { big - w } else { -w };
                edges.push(Edge {
                    u: index[x],
                    v: index[y],
                    weight,
                });
            }
        }
    }
    edges.sort_by_key(|e| (e.u.min(e.v), e.u.max(e.v)));
    let tree = WeightedTree {
        leaves: n,
        vertices: next,
        edges,
    };
    tree.check()?;
    if tree.leaf_distances() != *m {
        return Err(Error::Verification("realized tree does not reproduce the matrix".into()));
    }
    Ok(tree)
}

/// Extend a tree matrix to `n` leaves: new leaves hang off one internal
/// vertex `v` with pendant weight `max{C/2, C - C'}`, where `C'` is the
/// distance from `v` to the nearest existing leaf. Every new entry is `>= c`.
pub fn extend_tree(m: &DissimilarityMatrix, n: usize, c: Scalar) -> Result<DissimilarityMatrix> {
    if n < m.n() {
        return Err(Error::Dimension(format!("cannot extend {} to {n}", m.n())));
    }
    if m.n() == 2 {
        return extend_star_tree(m, n, c).map(|(e, _)| e);
    }
    let tree = realize_tree(m)?;
    let v = tree.internal_vertex().expect("tree on >= 3 leaves has an internal vertex");
    let dist = tree.distances_from(v);
    let nearest = dist[..tree.leaves].iter().copied().min().unwrap();
    let pendant = c.half().max(c - nearest);
    let old = m.n();
    Ok(DissimilarityMatrix::from_fn(n, |i, j| {
        match (i < old, j < old) {
            (true, true) => m.get(i, j),
            (true, false) => dist[i] + pendant,
            (false, true) => dist[j] + pendant,
            (false, false) => pendant.times(2),
        }
    }))
}

/// Place a tree matrix defined on the leaves `idx` into an `n`-leaf tree
/// matrix whose other entries are all `>= c`.
pub fn scatter_tree(m: &DissimilarityMatrix, idx: &[usize], n: usize, c: Scalar) -> Result<DissimilarityMatrix> {
    assert_eq!(idx.len(), m.n());
    let ext = extend_tree(m, n, c)?;
    // Position k < idx.len() of `ext` goes to idx[k]; the rest fill the gaps.
    let mut order: Vec<usize> = idx.to_vec();
    order.extend((0..n).filter(|x| !idx.contains(x)));
    let mut inverse = vec![0; n];
    for (k, &x) in order.iter().enumerate() {
        inverse[x] = k;
    }
    Ok(DissimilarityMatrix::from_fn(n, |i, j| ext.get(inverse[i], inverse[j])))
}

/// Star tree drawn as a weighted tree: one center, pendant weights `v_i`.
pub fn star_tree(v: &RowVector) -> WeightedTree {
    let n = v.len();
    WeightedTree {
        leaves: n,
        vertices: n + 1,
        edges: (0..n)
            .map(|i| Edge {
                u: i,
                v: n,
                weight: v.values[i],
            })
            .collect(),
    }
}
