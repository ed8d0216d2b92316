//! Exact chromatic numbers of graphs and small hypergraphs.
//!
//! Graphs are split into connected components (chromatic number is the
//! maximum) and into the components of their complement (a join, so the
//! chromatic number is the sum). What remains is solved by DSATUR
//! branch-and-bound seeded with a maximum clique.

use std::time::{Duration, Instant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<Vec<u64>>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                None
            } else {
                let t = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(w * 64 + t)
            }
        })
    })
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            adj: vec![vec![0; words]; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not graph edges");
        set_bit(&mut self.adj[a], b);
        set_bit(&mut self.adj[b], a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        bit(&self.adj[a], b)
    }

    pub fn degree(&self, v: usize) -> usize {
        count(&self.adj[v])
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        members(&self.adj[v]).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in members(&self.adj[a]) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Induced subgraph on `vs` (relabelled `0..vs.len()`).
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut g = Graph::new(vs.len());
        for (a, &x) in vs.iter().enumerate() {
            for (b, &y) in vs.iter().enumerate().skip(a + 1) {
                if self.has_edge(x, y) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    fn components_by(&self, adjacent: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut stack = vec![s];
            let mut part = vec![s];
            while let Some(x) = stack.pop() {
                for y in 0..self.n {
                    if comp[y] == usize::MAX && y != x && adjacent(x, y) {
                        comp[y] = id;
                        stack.push(y);
                        part.push(y);
                    }
                }
            }
            part.sort_unstable();
            out.push(part);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_by(|a, b| self.has_edge(a, b))
    }

    pub fn complement_components(&self) -> Vec<Vec<usize>> {
        self.components_by(|a, b| !self.has_edge(a, b))
    }

    pub fn is_proper(&self, colors: &[usize]) -> bool {
        self.edges().iter().all(|&(a, b)| colors[a] != colors[b])
    }

    /// A maximum clique, by branch and bound with greedy-coloring bounds.
    pub fn max_clique(&self) -> Vec<usize> {
        let mut best: Vec<usize> = Vec::new();
        let mut current = Vec::new();
        let all: Vec<usize> = (0..self.n).collect();
        self.clique_search(&mut current, all, &mut best);
        best.sort_unstable();
        best
    }

    fn clique_search(&self, current: &mut Vec<usize>, mut cand: Vec<usize>, best: &mut Vec<usize>) {
        if cand.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        // Greedy coloring of the candidates bounds the clique size from above.
        cand.sort_by_key(|&v| std::cmp::Reverse(self.degree(v)));
        let mut color_of = vec![0usize; cand.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in cand.iter().enumerate() {
            let c = classes
                .iter()
                .position(|cl| cl.iter().all(|&u| !self.has_edge(u, v)))
                .unwrap_or(classes.len());
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(v);
            color_of[k] = c + 1;
        }
        let mut order: Vec<(usize, usize)> = cand.iter().copied().zip(color_of).collect();
        order.sort_by_key(|&(_, c)| c);
        while let Some((v, c)) = order.pop() {
            if current.len() + c <= best.len() {
                return;
            }
            current.push(v);
            let next: Vec<usize> = order
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| self.has_edge(u, v))
                .collect();
            self.clique_search(current, next, best);
            current.pop();
        }
    }

    /// DSATUR greedy coloring.
    pub fn dsatur(&self) -> Vec<usize> {
        let mut colors = vec![usize::MAX; self.n];
        let mut seen: Vec<Vec<bool>> = vec![Vec::new(); self.n];
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| colors[v] == usize::MAX)
                .max_by_key(|&v| {
                    let sat = seen[v].iter().filter(|b| **b).count();
                    (sat, self.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            let c = (0..).find(|&c| !seen[v].get(c).copied().unwrap_or(false)).unwrap();
            colors[v] = c;
            for u in self.neighbors(v) {
                if seen[u].len() <= c {
                    seen[u].resize(c + 1, false);
                }
                seen[u][c] = true;
            }
        }
        colors
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphColoring {
    /// Exact chromatic number, or the best lower bound when the search was
    /// cut off by the deadline.
    pub lower: usize,
    /// Size of the coloring in `colors`.
    pub upper: usize,
    pub colors: Vec<usize>,
    pub clique: Vec<usize>,
}

impl GraphColoring {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Exact chromatic number with a witness coloring.
pub fn chromatic_number(g: &Graph) -> GraphColoring {
    chromatic_number_within(g, None)
}

/// As [`chromatic_number`], but gives up refining after `limit`, returning
/// the clique bound and the best coloring found.
pub fn chromatic_number_within(g: &Graph, limit: Option<Duration>) -> GraphColoring {
    let deadline = limit.map(|d| Instant::now() + d);
    solve(g, deadline)
}

fn solve(g: &Graph, deadline: Option<Instant>) -> GraphColoring {
    if g.n() == 0 {
        return GraphColoring {
            lower: 0,
            upper: 0,
            colors: Vec::new(),
            clique: Vec::new(),
        };
    }
    let comps = g.components();
    if comps.len() > 1 {
        let mut colors = vec![0; g.n()];
        let (mut lower, mut upper) = (0, 0);
        let mut clique = Vec::new();
        for part in comps {
            let sub = solve(&g.induced(&part), deadline);
            lower = lower.max(sub.lower);
            upper = upper.max(sub.upper);
            if sub.clique.len() > clique.len() {
                clique = sub.clique.iter().map(|&k| part[k]).collect();
            }
            for (k, &v) in part.iter().enumerate() {
                colors[v] = sub.colors[k];
            }
        }
        return GraphColoring {
            lower,
            upper,
            colors,
            clique,
        };
    }
    let co = g.complement_components();
    if co.len() > 1 {
        // Join: parts use disjoint palettes.
        let mut colors = vec![0; g.n()];
        let (mut lower, mut upper) = (0, 0);
        let mut clique = Vec::new();
        for part in co {
            let sub = solve(&g.induced(&part), deadline);
            for (k, &v) in part.iter().enumerate() {
                colors[v] = upper + sub.colors[k];
            }
            clique.extend(sub.clique.iter().map(|&k| part[k]));
            lower += sub.lower;
            upper += sub.upper;
        }
        clique.sort_unstable();
        return GraphColoring {
            lower,
            upper,
            colors,
            clique,
        };
    }
    let clique = g.max_clique();
    let mut best = g.dsatur();
    let mut best_k = best.iter().max().map_or(0, |c| c + 1);
    let lower = clique.len();
    let mut finished = true;
    if best_k > lower {
        let mut search = Search {
            g,
            colors: vec![usize::MAX; g.n()],
            sat: vec![vec![0; g.n() + 1]; g.n()],
            sat_size: vec![0; g.n()],
            best_k,
            best: best.clone(),
            lower,
            deadline,
            nodes: 0,
            timed_out: false,
        };
        for (c, &v) in clique.iter().enumerate() {
            search.assign(v, c);
        }
        search.branch(clique.len(), clique.len());
        finished = !search.timed_out;
        best_k = search.best_k;
        best = search.best;
    }
    GraphColoring {
        lower: if finished { best_k } else { lower },
        upper: best_k,
        colors: best,
        clique,
    }
}

struct Search<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    /// sat[v][c] = number of neighbors of v colored c.
    sat: Vec<Vec<u32>>,
    sat_size: Vec<usize>,
    best_k: usize,
    best: Vec<usize>,
    lower: usize,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for u in members(&self.g.adj[v]) {
            if self.sat[u][c] == 0 {
                self.sat_size[u] += 1;
            }
            self.sat[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = usize::MAX;
        for u in members(&self.g.adj[v]) {
            self.sat[u][c] -= 1;
            if self.sat[u][c] == 0 {
                self.sat_size[u] -= 1;
            }
        }
    }

    fn branch(&mut self, colored: usize, used: usize) {
        if self.timed_out || self.best_k == self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.timed_out = true;
                    return;
                }
            }
        }
        if colored == self.g.n() {
            self.best_k = used;
            self.best = self.colors.clone();
            return;
        }
        let mut v = usize::MAX;
        let mut key = (0usize, 0usize);
        for u in 0..self.g.n() {
            if self.colors[u] != usize::MAX {
                continue;
            }
            let uncolored_deg = members(&self.g.adj[u])
                .filter(|&w| self.colors[w] == usize::MAX)
                .count();
            let k = (self.sat_size[u], uncolored_deg);
            if v == usize::MAX || k > key {
                v = u;
                key = k;
            }
        }
        for c in 0..used {
            if self.sat[v][c] == 0 {
                self.assign(v, c);
                self.branch(colored + 1, used);
                self.unassign(v);
                if self.best_k == self.lower || self.timed_out {
                    return;
                }
            }
        }
        if used + 1 < self.best_k {
            self.assign(v, used);
            self.branch(colored + 1, used + 1);
            self.unassign(v);
        }
    }
}

/// Chromatic number of a hypergraph with hyperedges of any size. A
/// hyperedge of size one makes it uncolorable (`None`). Intended for small
/// instances; graphs should use [`chromatic_number`].
pub fn hypergraph_chromatic_number(n: usize, edges: &[Vec<usize>]) -> Option<(usize, Vec<usize>)> {
    if edges.iter().any(|e| e.len() <= 1) {
        return None;
    }
    if n == 0 {
        return Some((0, Vec::new()));
    }
    if edges.iter().all(|e| e.len() == 2) {
        let g = Graph::from_edges(n, &edges.iter().map(|e| (e[0], e[1])).collect::<Vec<_>>());
        let c = chromatic_number(&g);
        return Some((c.upper, c.colors));
    }
    // Edges checked once their largest vertex is colored.
    let mut closing: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); n];
    for e in edges {
        closing[*e.iter().max().unwrap()].push(e);
    }
    fn go(v: usize, k: usize, used: usize, colors: &mut Vec<usize>, closing: &[Vec<&Vec<usize>>]) -> bool {
        if v == colors.len() {
            return true;
        }
        for c in 0..(used + 1).min(k) {
            colors[v] = c;
            let ok = closing[v]
                .iter()
                .all(|e| e.iter().any(|&u| colors[u] != colors[e[0]]));
            if ok && go(v + 1, k, used.max(c + 1), colors, closing) {
                return true;
            }
        }
        false
    }
    for k in 1..=n {
        let mut colors = vec![0; n];
        if go(0, k, 0, &mut colors, &closing) {
            return Some((k, colors));
        }
    }
    unreachable!("n colors always suffice without loops")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn odd_and_even_cycles() {
        assert_eq!(chromatic_number(&cycle(5)).upper, 3);
        assert_eq!(chromatic_number(&cycle(6)).upper, 2);
        assert_eq!(chromatic_number(&cycle(7)).lower, 3);
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = Graph::from_edges(10, &edges);
        let c = chromatic_number(&g);
        assert_eq!((c.lower, c.upper), (3, 3));
        assert!(g.is_proper(&c.colors));
    }

    #[test]
    fn join_of_cycles_adds() {
        // C5 join C5 has chromatic number 6.
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(5 + i, 5 + (i + 1) % 5);
            for j in 5..10 {
                g.add_edge(i, j);
            }
        }
        let c = chromatic_number(&g);
        assert_eq!(c.upper, 6);
        assert!(c.is_exact());
        assert!(g.is_proper(&c.colors));
    }

    #[test]
    fn edgeless_needs_one_color() {
        assert_eq!(chromatic_number(&Graph::new(4)).upper, 1);
    }

    #[test]
    fn hypergraph_triangle_edge() {
        assert_eq!(hypergraph_chromatic_number(3, &[vec![0, 1, 2]]).unwrap().0, 2);
        assert!(hypergraph_chromatic_number(3, &[vec![1]]).is_none());
    }
}
