//! Deficiency hypergraphs and their chromatic numbers.
//!
//! For a point `w` and a tropical basis, every basis polynomial whose minimum
//! at `w` is attained only once contributes a hyperedge: the positions
//! appearing in the unique minimal term. Any decomposition of `w` into `r`
//! points of the variety colors the positions properly with `r` colors, so the
//! chromatic number bounds the rank from below.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use serde::Serialize;
use serde_json::json;

use crate::coloring::{chromatic_number_within, hypergraph_chromatic_number, Graph};
use crate::error::{Error, Result};
use crate::matrix::{diss_pairs, sym_pairs, DissimilarityMatrix, Matrix};
use crate::polynomial::{pair, vanishes_at, Basis, Pair};
use crate::rank::RankValue;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficiencyHypergraph {
    pub n: usize,
    pub basis: Basis,
    /// Coordinate positions, 0-based pairs.
    pub vertices: Vec<Pair>,
    /// Hyperedges as sorted vertex indices; size one means a loop.
    pub hyperedges: Vec<Vec<usize>>,
    /// For each hyperedge, the first basis polynomial producing it.
    pub sources: Vec<String>,
}

impl DeficiencyHypergraph {
    pub fn vertex_index(&self, p: Pair) -> Option<usize> {
        let p = pair(p.0, p.1);
        self.vertices.iter().position(|&q| q == p)
    }

    pub fn is_empty(&self) -> bool {
        self.hyperedges.is_empty()
    }

    pub fn loops(&self) -> Vec<Pair> {
        self.hyperedges
            .iter()
            .filter(|e| e.len() == 1)
            .map(|e| self.vertices[e[0]])
            .collect()
    }

    /// The underlying graph, if every hyperedge has size two.
    pub fn graph(&self) -> Option<Graph> {
        if self.hyperedges.iter().any(|e| e.len() != 2) {
            return None;
        }
        let edges: Vec<(usize, usize)> = self.hyperedges.iter().map(|e| (e[0], e[1])).collect();
        Some(Graph::from_edges(self.vertices.len(), &edges))
    }

    /// Edges as pairs of positions (graphs only; loops are dropped).
    pub fn edge_pairs(&self) -> Vec<(Pair, Pair)> {
        self.hyperedges
            .iter()
            .filter(|e| e.len() == 2)
            .map(|e| (self.vertices[e[0]], self.vertices[e[1]]))
            .collect()
    }

    fn label(&self, v: usize) -> String {
        let (i, j) = self.vertices[v];
        format!("{},{}", i + 1, j + 1)
    }

    /// DOT rendering; loops become self-edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph deficiency {\n");
        for v in 0..self.vertices.len() {
            out.push_str(&format!("  \"{}\";\n", self.label(v)));
        }
        for e in &self.hyperedges {
            match e.len() {
                1 => out.push_str(&format!("  \"{0}\" -- \"{0}\";\n", self.label(e[0]))),
                2 => out.push_str(&format!(
                    "  \"{}\" -- \"{}\";\n",
                    self.label(e[0]),
                    self.label(e[1])
                )),
                _ => {
                    // Hyperedges of size > 2 are drawn as a star on a dummy node.
                    let hub = format!("e{}", e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("_"));
                    out.push_str(&format!("  \"{hub}\" [shape=point];\n"));
                    for &v in e {
                        out.push_str(&format!("  \"{hub}\" -- \"{}\";\n", self.label(v)));
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON with 1-based positions.
    pub fn to_json(&self) -> serde_json::Value {
        let pos = |p: &Pair| json!([p.0 + 1, p.1 + 1]);
        json!({
            "basis": self.basis.name(),
            "vertices": self.vertices.iter().map(pos).collect::<Vec<_>>(),
            "hyperedges": self.hyperedges.iter().map(|e| {
                e.iter().map(|&v| pos(&self.vertices[v])).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "sources": self.sources,
        })
    }
}

/// Build the deficiency hypergraph of `w`. The symmetric-minors basis needs a
/// symmetric matrix; the other two need a dissimilarity matrix.
pub fn build_deficiency(w: &Matrix, basis: Basis) -> Result<DeficiencyHypergraph> {
    let n = w.n();
    let vertices = match (basis, w) {
        (Basis::SymmetricMinors, Matrix::Symmetric(_)) => sym_pairs(n),
        (Basis::StarTree | Basis::Pluecker, Matrix::Dissimilarity(_)) => diss_pairs(n),
        _ => {
            return Err(Error::Precondition(format!(
                "basis {} does not apply to a {} matrix",
                basis.name(),
                w.kind_name()
            )))
        }
    };
    let index: BTreeMap<Pair, usize> = vertices.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut seen = BTreeSet::new();
    let mut hyperedges = Vec::new();
    let mut sources = Vec::new();
    for p in basis.polynomials(n) {
        let v = vanishes_at(&p, w);
        if v.vanishes {
            continue;
        }
        let mut edge: Vec<usize> = p.monomials[v.minimizers[0]]
            .support()
            .iter()
            .map(|q| index[q])
            .collect();
        edge.sort_unstable();
        if seen.insert(edge.clone()) {
            hyperedges.push(edge);
            sources.push(p.to_string());
        }
    }
    Ok(DeficiencyHypergraph {
        n,
        basis,
        vertices,
        hyperedges,
        sources,
    })
}

/// Pluecker deficiency graph of a dissimilarity matrix, built directly from
/// the four-point pairings.
pub fn pluecker_deficiency(m: &DissimilarityMatrix) -> DeficiencyHypergraph {
    build_deficiency(&Matrix::Dissimilarity(m.clone()), Basis::Pluecker)
        .expect("pluecker basis applies to dissimilarity matrices")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficiencyColoring {
    pub value: RankValue,
    /// `false` when the search was cut off; `value` is then a lower bound.
    pub exact: bool,
    /// Color per vertex of a proper coloring, when finite.
    pub coloring: Option<Vec<usize>>,
    /// A loop certifying infinite chromatic number.
    pub loop_at: Option<Pair>,
    /// Clique witnessing the lower bound (graphs only).
    pub clique: Vec<usize>,
}

/// Exact chromatic number; infinite iff there is a loop.
pub fn chromatic_number(h: &DeficiencyHypergraph) -> DeficiencyColoring {
    chromatic_number_limited(h, None)
}

/// As [`chromatic_number`], but stop refining after `limit`; the result then
/// carries the clique lower bound with `exact = false`.
pub fn chromatic_number_limited(h: &DeficiencyHypergraph, limit: Option<Duration>) -> DeficiencyColoring {
    if let Some(&p) = h.loops().first() {
        return DeficiencyColoring {
            value: RankValue::Infinite,
            exact: true,
            coloring: None,
            loop_at: Some(p),
            clique: Vec::new(),
        };
    }
    if h.is_empty() {
        return DeficiencyColoring {
            value: RankValue::Finite(1),
            exact: true,
            coloring: Some(vec![0; h.vertices.len()]),
            loop_at: None,
            clique: Vec::new(),
        };
    }
    if let Some(g) = h.graph() {
        let c = chromatic_number_within(&g, limit);
        return DeficiencyColoring {
            value: RankValue::Finite(c.lower.max(1)),
            exact: c.is_exact(),
            coloring: c.is_exact().then_some(c.colors),
            loop_at: None,
            clique: c.clique,
        };
    }
    let (k, colors) = hypergraph_chromatic_number(h.vertices.len(), &h.hyperedges)
        .expect("loops handled above");
    DeficiencyColoring {
        value: RankValue::Finite(k.max(1)),
        exact: true,
        coloring: Some(colors),
        loop_at: None,
        clique: Vec::new(),
    }
}

/// The coloring lower bound on the rank of `w` with respect to `basis`.
pub fn rank_lower_bound(w: &Matrix, basis: Basis) -> Result<RankValue> {
    Ok(chromatic_number(&build_deficiency(w, basis)?).value)
}

/// Chromatic number of the subgraph induced on `vertices` (a lower bound on
/// the chromatic number of the whole graph).
pub fn induced_chromatic_number(h: &DeficiencyHypergraph, vertices: &[usize]) -> Option<usize> {
    let g = h.graph()?;
    let c = chromatic_number_within(&g.induced(vertices), None);
    Some(c.upper.max(1))
}

// ---------------------------------------------------------------------------
// Five-point deficiency graphs inside the Petersen graph.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PetersenClass {
    Trivial,
    FewerThan5Edges,
    /// Two adjacent degree-3 vertices (`12` and `45`), each with two leaves.
    DoubleFork,
    /// A degree-3 vertex `12` with one leg of length 1 and two of length 2.
    Spider,
    FiveCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PetersenClassification {
    pub class: PetersenClass,
    /// For the two five-edge tree types: `perm` with the canonical graph's
    /// vertex `{a, b}` mapped to `{perm[a], perm[b]}` giving `Δ_M`.
    pub relabeling: Option<Vec<usize>>,
    pub edges: Vec<(Pair, Pair)>,
}

fn edge_key(a: Pair, b: Pair) -> (Pair, Pair) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn canonical_edges(list: &[((usize, usize), (usize, usize))]) -> BTreeSet<(Pair, Pair)> {
    // Written 1-based for readability.
    list.iter()
        .map(|&((a, b), (c, d))| edge_key((a - 1, b - 1), (c - 1, d - 1)))
        .collect()
}

pub fn double_fork_graph() -> BTreeSet<(Pair, Pair)> {
    canonical_edges(&[
        ((1, 2), (3, 4)),
        ((1, 2), (3, 5)),
        ((1, 2), (4, 5)),
        ((1, 3), (4, 5)),
        ((2, 3), (4, 5)),
    ])
}

pub fn spider_graph() -> BTreeSet<(Pair, Pair)> {
    canonical_edges(&[
        ((1, 2), (3, 4)),
        ((1, 2), (3, 5)),
        ((1, 2), (4, 5)),
        ((1, 3), (4, 5)),
        ((2, 4), (3, 5)),
    ])
}

pub fn relabel_edges(edges: &BTreeSet<(Pair, Pair)>, perm: &[usize]) -> BTreeSet<(Pair, Pair)> {
    let f = |p: Pair| pair(perm[p.0], perm[p.1]);
    edges.iter().map(|&(a, b)| edge_key(f(a), f(b))).collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            let j = if k % 2 == 0 { i } else { 0 };
            cur.swap(j, k - 1);
        }
    }
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

/// Relabeling taking `canonical` onto `edges`, if the two are isomorphic
/// through a permutation of the five points.
pub fn isomorphism_to(canonical: &BTreeSet<(Pair, Pair)>, edges: &BTreeSet<(Pair, Pair)>) -> Option<Vec<usize>> {
    if canonical.len() != edges.len() {
        return None;
    }
    permutations(5)
        .into_iter()
        .find(|p| relabel_edges(canonical, p) == *edges)
}

fn is_five_cycle(edges: &BTreeSet<(Pair, Pair)>) -> bool {
    if edges.len() != 5 {
        return false;
    }
    let mut deg: BTreeMap<Pair, usize> = BTreeMap::new();
    for &(a, b) in edges {
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
    }
    if deg.len() != 5 || deg.values().any(|&d| d != 2) {
        return false;
    }
    // Connected?
    let verts: Vec<Pair> = deg.keys().copied().collect();
    let mut seen = BTreeSet::from([verts[0]]);
    let mut stack = vec![verts[0]];
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == 5
}

/// Place a 5x5 deficiency graph in the taxonomy of possible shapes. Errors if
/// the graph falls outside it, which would contradict the classification.
pub fn classify_petersen(m: &DissimilarityMatrix) -> Result<PetersenClassification> {
    if m.n() != 5 {
        return Err(Error::Dimension(format!("expected a 5x5 matrix, got {}", m.n())));
    }
    let h = pluecker_deficiency(m);
    let edges: BTreeSet<(Pair, Pair)> = h.edge_pairs().into_iter().map(|(a, b)| edge_key(a, b)).collect();
    let list: Vec<(Pair, Pair)> = edges.iter().copied().collect();
    let class = |class, relabeling| PetersenClassification {
        class,
        relabeling,
        edges: list.clone(),
    };
    match edges.len() {
        0 => return Ok(class(PetersenClass::Trivial, None)),
        1..=4 => return Ok(class(PetersenClass::FewerThan5Edges, None)),
        _ => {}
    }
    if is_five_cycle(&edges) {
        return Ok(class(PetersenClass::FiveCycle, None));
    }
    if let Some(p) = isomorphism_to(&double_fork_graph(), &edges) {
        return Ok(class(PetersenClass::DoubleFork, Some(p)));
    }
    if let Some(p) = isomorphism_to(&spider_graph(), &edges) {
        return Ok(class(PetersenClass::Spider, Some(p)));
    }
    Err(Error::Verification(format!(
        "deficiency graph with edges {list:?} is outside the five-point taxonomy"
    )))
}

/// All cycles of length 6 and 8 in the Petersen graph on pairs of `[5]`,
/// each listed once as a vertex sequence.
pub fn petersen_even_cycles() -> Vec<Vec<Pair>> {
    let verts = diss_pairs(5);
    let disjoint = |a: Pair, b: Pair| a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1;
    let mut found: BTreeSet<BTreeSet<(Pair, Pair)>> = BTreeSet::new();
    let mut out = Vec::new();
    fn extend(
        path: &mut Vec<Pair>,
        len: usize,
        verts: &[Pair],
        disjoint: &dyn Fn(Pair, Pair) -> bool,
        found: &mut BTreeSet<BTreeSet<(Pair, Pair)>>,
        out: &mut Vec<Vec<Pair>>,
    ) {
        if path.len() == len {
            if disjoint(path[0], path[len - 1]) {
                let key: BTreeSet<(Pair, Pair)> =
                    (0..len).map(|k| edge_key(path[k], path[(k + 1) % len])).collect();
                if found.insert(key) {
                    out.push(path.clone());
                }
            }
            return;
        }
        let last = *path.last().unwrap();
        for &v in verts {
            if v > path[0] && !path.contains(&v) && disjoint(last, v) {
                path.push(v);
                extend(path, len, verts, disjoint, found, out);
                path.pop();
            }
        }
    }
    for len in [6, 8] {
        for &s in &verts {
            extend(&mut vec![s], len, &verts, &disjoint, &mut found, &mut out);
        }
    }
    out
}

/// An even cycle of the Petersen graph whose edges alternate between members
/// and non-members of `edges`.
pub fn has_alternating_even_cycle(edges: &[(Pair, Pair)]) -> Option<Vec<Pair>> {
    let set: BTreeSet<(Pair, Pair)> = edges.iter().map(|&(a, b)| edge_key(a, b)).collect();
    petersen_even_cycles().into_iter().find(|c| {
        let len = c.len();
        let member: Vec<bool> = (0..len)
            .map(|k| set.contains(&edge_key(c[k], c[(k + 1) % len])))
            .collect();
        (0..len).all(|k| member[k] != member[(k + 1) % len])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_cycle_counts() {
        let cycles = petersen_even_cycles();
        assert_eq!(cycles.iter().filter(|c| c.len() == 6).count(), 10);
        assert_eq!(cycles.iter().filter(|c| c.len() == 8).count(), 15);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(5).len(), 120);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn empty_graph_has_no_alternating_cycle() {
        assert!(has_alternating_even_cycle(&[]).is_none());
    }
}
