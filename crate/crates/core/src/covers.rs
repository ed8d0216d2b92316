//! Cover characterizations of rank for 0/1 matrices.
//!
//! `G_M` has an edge `ij` exactly when `M_ij = 0`. Symmetric rank counts
//! clique covers of edges and vertices, star tree rank counts covers of edges
//! by cliques and stars, and tree rank counts covers by complete multipartite
//! subgraphs.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::{DissimilarityMatrix, RowVector, SymmetricMatrix};
use crate::rank::{Decomposition, RankValue};
use crate::scalar::Scalar;

/// Largest vertex count for the exhaustive cover searches (edges and vertices
/// must fit one 128-bit mask).
pub const MAX_COVER_VERTICES: usize = 15;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroOneGraph {
    pub n: usize,
    /// Neighbor bitmask per vertex.
    adj: Vec<u64>,
}

impl ZeroOneGraph {
    pub fn new(n: usize) -> ZeroOneGraph {
        assert!(n <= 64, "graphs up to 64 vertices");
        ZeroOneGraph {
            n,
            adj: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> ZeroOneGraph {
        let mut g = ZeroOneGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adj[v] == 0).collect()
    }

    /// Zero pattern of the off-diagonal entries of a symmetric matrix.
    pub fn of_symmetric(m: &SymmetricMatrix) -> ZeroOneGraph {
        let mut g = ZeroOneGraph::new(m.n());
        for (i, j) in m.pairs() {
            if i != j && m.get(i, j).is_zero() {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn of_dissimilarity(m: &DissimilarityMatrix) -> ZeroOneGraph {
        let mut g = ZeroOneGraph::new(m.n());
        for (i, j) in m.pairs() {
            if m.get(i, j).is_zero() {
                g.add_edge(i, j);
            }
        }
        g
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Maximal cliques (Bron–Kerbosch with pivoting), as vertex masks, sorted.
    pub fn maximal_cliques(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.bron_kerbosch(0, self.all(), 0, &mut out);
        out.sort_unstable_by_key(|&m| mask_key(m));
        out
    }

    fn bron_kerbosch(&self, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !self.adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.bron_kerbosch(r | 1 << v, p & self.adj[v], x & self.adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }

    /// A clique of size `k`, smallest in lexicographic order of sorted vertex
    /// lists.
    pub fn find_clique(&self, k: usize) -> Option<Vec<usize>> {
        fn go(g: &ZeroOneGraph, k: usize, start: usize, cand: u64, cur: &mut Vec<usize>) -> bool {
            if cur.len() == k {
                return true;
            }
            if (cand.count_ones() as usize) < k - cur.len() {
                return false;
            }
            for v in start..g.n {
                if cand >> v & 1 == 1 {
                    cur.push(v);
                    if go(g, k, v + 1, cand & g.adj[v], cur) {
                        return true;
                    }
                    cur.pop();
                }
            }
            false
        }
        let mut cur = Vec::new();
        go(self, k, 0, self.all(), &mut cur).then_some(cur)
    }

    pub fn complement(&self) -> ZeroOneGraph {
        let all = self.all();
        ZeroOneGraph {
            n: self.n,
            adj: (0..self.n).map(|v| all & !self.adj[v] & !(1 << v)).collect(),
        }
    }
}

fn mask_key(m: u64) -> Vec<usize> {
    bits(m)
}

fn bits(m: u64) -> Vec<usize> {
    (0..64).filter(|&v| m >> v & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoverElement {
    Clique { vertices: Vec<usize> },
    Star { center: usize, leaves: Vec<usize> },
    Multipartite { parts: Vec<Vec<usize>> },
}

impl CoverElement {
    /// 1-based JSON rendering.
    pub fn to_json(&self) -> serde_json::Value {
        let one = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        match self {
            CoverElement::Clique { vertices } => json!({"kind": "clique", "vertices": one(vertices)}),
            CoverElement::Star { center, leaves } => {
                json!({"kind": "star", "center": center + 1, "leaves": one(leaves)})
            }
            CoverElement::Multipartite { parts } => json!({
                "kind": "multipartite",
                "parts": parts.iter().map(|p| one(p)).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = match self {
            CoverElement::Clique { vertices } => vertices.clone(),
            CoverElement::Star { center, leaves } => {
                let mut v = leaves.clone();
                v.push(*center);
                v
            }
            CoverElement::Multipartite { parts } => parts.concat(),
        };
        v.sort_unstable();
        v
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self {
            CoverElement::Clique { vertices } => {
                for (k, &a) in vertices.iter().enumerate() {
                    for &b in &vertices[k + 1..] {
                        out.push((a.min(b), a.max(b)));
                    }
                }
            }
            CoverElement::Star { center, leaves } => {
                for &l in leaves {
                    out.push(((*center).min(l), (*center).max(l)));
                }
            }
            CoverElement::Multipartite { parts } => {
                for (k, p) in parts.iter().enumerate() {
                    for q in &parts[k + 1..] {
                        for &a in p {
                            for &b in q {
                                out.push((a.min(b), a.max(b)));
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Every edge of the element is an edge of `g`.
    pub fn is_subgraph_of(&self, g: &ZeroOneGraph) -> bool {
        self.edges().iter().all(|&(a, b)| g.has_edge(a, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub elements: Vec<CoverElement>,
}

impl Cover {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self.elements.iter().map(|e| e.to_json()).collect::<Vec<_>>())
    }

    pub fn covers_edges(&self, g: &ZeroOneGraph) -> bool {
        let covered: std::collections::BTreeSet<(usize, usize)> =
            self.elements.iter().flat_map(|e| e.edges()).collect();
        g.edges().iter().all(|e| covered.contains(e))
    }
}

/// Universe numbering: edges first (in `g.edges()` order), then vertices.
struct Universe {
    edge_id: Vec<Vec<usize>>,
    n_edges: usize,
    size: usize,
}

impl Universe {
    fn new(g: &ZeroOneGraph, with_vertices: bool) -> Result<Universe> {
        let edges = g.edges();
        let size = edges.len() + if with_vertices { g.n } else { 0 };
        if size > 128 {
            return Err(Error::Precondition(format!(
                "cover search supports at most 128 edges and vertices, got {size}"
            )));
        }
        let mut edge_id = vec![vec![usize::MAX; g.n]; g.n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            edge_id[a][b] = k;
            edge_id[b][a] = k;
        }
        Ok(Universe {
            edge_id,
            n_edges: edges.len(),
            size,
        })
    }

    fn full(&self) -> u128 {
        if self.size == 128 {
            u128::MAX
        } else {
            (1u128 << self.size) - 1
        }
    }

    fn edge_mask(&self, edges: &[(usize, usize)]) -> u128 {
        edges
            .iter()
            .fold(0, |acc, &(a, b)| acc | 1u128 << self.edge_id[a][b])
    }

    fn vertex_mask(&self, vs: &[usize]) -> u128 {
        vs.iter().fold(0, |acc, &v| acc | 1u128 << (self.n_edges + v))
    }
}

/// Minimum set cover of `full` by `sets`; returns the lexicographically
/// smallest list of set indices among minimum covers.
fn min_set_cover(sets: &[u128], full: u128) -> Option<Vec<usize>> {
    if full == 0 {
        return Some(Vec::new());
    }
    if sets.iter().fold(0, |a, s| a | s) & full != full {
        return None;
    }
    let max_size = sets.iter().map(|s| (s & full).count_ones()).max().unwrap_or(0).max(1);

    // Phase 1: branch on the element with fewest covering sets.
    fn bound(uncovered: u128, max_size: u32) -> usize {
        uncovered.count_ones().div_ceil(max_size) as usize
    }
    fn branch(sets: &[u128], uncovered: u128, depth: usize, best: &mut usize, max_size: u32) {
        if uncovered == 0 {
            *best = (*best).min(depth);
            return;
        }
        if depth + bound(uncovered, max_size) >= *best {
            return;
        }
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            let c = sets.iter().filter(|s| *s >> e & 1 == 1).count();
            if c < fewest {
                fewest = c;
                pick = Some(e);
            }
        }
        let e = pick.unwrap();
        let mut options: Vec<&u128> = sets.iter().filter(|s| *s >> e & 1 == 1).collect();
        options.sort_by_key(|s| std::cmp::Reverse((*s & uncovered).count_ones()));
        for s in options {
            branch(sets, uncovered & !s, depth + 1, best, max_size);
        }
    }
    let mut best = usize::MAX;
    branch(sets, full, 0, &mut best, max_size);

    // Phase 2: lexicographically first cover of that size.
    let k = best;
    let mut last_cover = vec![0usize; 128];
    for (i, s) in sets.iter().enumerate() {
        let mut x = s & full;
        while x != 0 {
            let e = x.trailing_zeros() as usize;
            x &= x - 1;
            last_cover[e] = i;
        }
    }
    fn lex(
        sets: &[u128],
        last_cover: &[usize],
        uncovered: u128,
        start: usize,
        k: usize,
        max_size: u32,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if uncovered == 0 {
            return true;
        }
        if chosen.len() + bound(uncovered, max_size) > k {
            return false;
        }
        let mut x = uncovered;
        while x != 0 {
            let e = x.trailing_zeros() as usize;
            x &= x - 1;
            if last_cover[e] < start {
                return false;
            }
        }
        for i in start..sets.len() {
            if sets[i] & uncovered == 0 {
                continue;
            }
            chosen.push(i);
            if lex(sets, last_cover, uncovered & !sets[i], i + 1, k, max_size, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let found = lex(sets, &last_cover, full, 0, k, max_size, &mut chosen);
    debug_assert!(found);
    Some(chosen)
}

fn check_size(g: &ZeroOneGraph) -> Result<()> {
    if g.n > MAX_COVER_VERTICES {
        return Err(Error::Precondition(format!(
            "exhaustive cover search supports n <= {MAX_COVER_VERTICES}, got {}",
            g.n
        )));
    }
    Ok(())
}

/// Minimum cover of every edge and every vertex by cliques.
pub fn min_clique_cover(g: &ZeroOneGraph) -> Result<Cover> {
    check_size(g)?;
    let u = Universe::new(g, true)?;
    let cliques = g.maximal_cliques();
    let sets: Vec<u128> = cliques
        .iter()
        .map(|&c| {
            let vs = bits(c);
            let el = CoverElement::Clique { vertices: vs.clone() };
            u.edge_mask(&el.edges()) | u.vertex_mask(&vs)
        })
        .collect();
    let chosen = min_set_cover(&sets, u.full()).expect("maximal cliques cover everything");
    Ok(Cover {
        elements: chosen
            .into_iter()
            .map(|i| CoverElement::Clique {
                vertices: bits(cliques[i]),
            })
            .collect(),
    })
}

fn zero_one_error(what: &str) -> Error {
    Error::Precondition(format!("{what} needs a matrix with entries in {{0, 1}}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroOneRank {
    pub value: RankValue,
    /// Lower end of the possible range when `value` is not yet determined.
    pub lower: usize,
    pub cover: Option<Cover>,
    pub decomposition: Option<Decomposition>,
    /// Symmetric case: a diagonal `1` facing a `0` in its row.
    pub infinite_pair: Option<(usize, usize)>,
    /// Star case: whether a solid cover of minimum size exists.
    pub solid: Option<bool>,
}

/// Symmetric Barvinok rank of a 0/1 symmetric matrix.
pub fn symmetric_rank_01(m: &SymmetricMatrix) -> Result<ZeroOneRank> {
    if !m.is_zero_one() {
        return Err(zero_one_error("symmetric_rank_01"));
    }
    let n = m.n();
    for i in 0..n {
        if m.get(i, i) == Scalar::ONE {
            if let Some(j) = (0..n).find(|&j| j != i && m.get(i, j).is_zero()) {
                return Ok(ZeroOneRank {
                    value: RankValue::Infinite,
                    lower: 0,
                    cover: None,
                    decomposition: None,
                    infinite_pair: Some((i.min(j), i.max(j))),
                    solid: None,
                });
            }
        }
    }
    let zero_diag: Vec<usize> = (0..n).filter(|&i| m.get(i, i).is_zero()).collect();
    let cover = if zero_diag.is_empty() {
        Cover { elements: Vec::new() }
    } else {
        min_clique_cover(&ZeroOneGraph::of_symmetric(&m.principal(&zero_diag)))?
    };
    let mut vectors: Vec<RowVector> = cover
        .elements
        .iter()
        .map(|el| {
            let mut v = vec![Scalar::ONE; n];
            for x in el.vertices() {
                v[zero_diag[x]] = Scalar::ZERO;
            }
            RowVector::new(v)
        })
        .collect();
    let extra = zero_diag.len() < n;
    if extra {
        vectors.push(RowVector::new(vec![Scalar::new(1, 2); n]));
    }
    let cover = Cover {
        elements: cover
            .elements
            .into_iter()
            .map(|el| CoverElement::Clique {
                vertices: el.vertices().into_iter().map(|x| zero_diag[x]).collect(),
            })
            .collect(),
    };
    let r = vectors.len();
    Ok(ZeroOneRank {
        value: RankValue::Finite(r),
        lower: r,
        cover: Some(cover),
        decomposition: Some(Decomposition::symmetric(vectors)),
        infinite_pair: None,
        solid: None,
    })
}

fn star_candidates(g: &ZeroOneGraph) -> Vec<CoverElement> {
    let mut out: Vec<CoverElement> = g
        .maximal_cliques()
        .into_iter()
        .filter(|c| c.count_ones() >= 2)
        .map(|c| CoverElement::Clique { vertices: bits(c) })
        .collect();
    for c in 0..g.n {
        if g.neighbors(c).count_ones() >= 2 {
            out.push(CoverElement::Star {
                center: c,
                leaves: bits(g.neighbors(c)),
            });
        }
    }
    out
}

/// The four pairwise conditions making a clique/star cover solid.
pub fn is_solid(g: &ZeroOneGraph, cover: &[CoverElement]) -> bool {
    let mut in_clique = 0u64;
    let mut centers = 0u64;
    for el in cover {
        match el {
            CoverElement::Clique { vertices } => vertices.iter().for_each(|&v| in_clique |= 1 << v),
            CoverElement::Star { center, .. } => centers |= 1 << center,
            CoverElement::Multipartite { .. } => return false,
        }
    }
    let special = in_clique | centers;
    for i in 0..g.n {
        for j in i + 1..g.n {
            if g.has_edge(i, j) || special >> i & 1 == 1 || special >> j & 1 == 1 {
                continue;
            }
            let co_leaves = cover.iter().any(|el| {
                matches!(el, CoverElement::Star { leaves, .. } if leaves.contains(&i) && leaves.contains(&j))
            });
            if !co_leaves {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueStarCover {
    pub cover: Cover,
    pub size: usize,
    /// A solid cover of the same size, if one exists.
    pub solid: Option<Cover>,
}

/// Minimum cover of the edges by cliques and stars, and a solid cover of the
/// same size when there is one.
pub fn min_clique_star_cover(g: &ZeroOneGraph) -> Result<CliqueStarCover> {
    check_size(g)?;
    let u = Universe::new(g, false)?;
    let cands = star_candidates(g);
    let sets: Vec<u128> = cands.iter().map(|el| u.edge_mask(&el.edges())).collect();
    let chosen = min_set_cover(&sets, u.full()).expect("candidates cover every edge");
    let size = chosen.len();
    let cover = Cover {
        elements: chosen.iter().map(|&i| cands[i].clone()).collect(),
    };
    let solid = if is_solid(g, &cover.elements) {
        Some(cover.clone())
    } else {
        find_solid(g, &cands, &sets, u.full(), size)
    };
    Ok(CliqueStarCover { cover, size, solid })
}

/// Search all covers of size `k` built from maximal elements for a solid one.
/// Enlarging a clique or a star's leaf set never breaks solidity, so maximal
/// elements suffice.
fn find_solid(
    g: &ZeroOneGraph,
    cands: &[CoverElement],
    sets: &[u128],
    full: u128,
    k: usize,
) -> Option<Cover> {
    fn go(
        g: &ZeroOneGraph,
        cands: &[CoverElement],
        sets: &[u128],
        full: u128,
        start: usize,
        k: usize,
        covered: u128,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            if covered & full != full {
                return false;
            }
            let els: Vec<CoverElement> = chosen.iter().map(|&i| cands[i].clone()).collect();
            return is_solid(g, &els);
        }
        for i in start..cands.len() {
            // Every element of a minimum cover covers something new.
            if sets[i] & !covered == 0 {
                continue;
            }
            chosen.push(i);
            if go(g, cands, sets, full, i + 1, k, covered | sets[i], chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(g, cands, sets, full, 0, k, 0, &mut chosen).then(|| Cover {
        elements: chosen.into_iter().map(|i| cands[i].clone()).collect(),
    })
}

/// Generator of the star tree summand attached to a cover element: zero on a
/// clique and one elsewhere; `-1/2` at a star's center, `1/2` on its leaves,
/// `3/2` elsewhere.
pub fn star_element_vector(n: usize, el: &CoverElement) -> RowVector {
    match el {
        CoverElement::Clique { vertices } => {
            let mut v = vec![Scalar::ONE; n];
            for &x in vertices {
                v[x] = Scalar::ZERO;
            }
            RowVector::new(v)
        }
        CoverElement::Star { center, leaves } => {
            let mut v = vec![Scalar::new(3, 2); n];
            for &x in leaves {
                v[x] = Scalar::new(1, 2);
            }
            v[*center] = Scalar::new(-1, 2);
            RowVector::new(v)
        }
        CoverElement::Multipartite { .. } => panic!("multipartite elements have no star vector"),
    }
}

/// Star tree rank of a 0/1 dissimilarity matrix from clique/star covers.
///
/// With a solid minimum cover the rank is its size `r`. Otherwise the cover
/// plus the all-ones matrix gives `r + 1` and the value is left open between
/// `r` and `r + 1` (`value` carries the upper end, `lower = r`).
pub fn star_tree_rank_01(m: &DissimilarityMatrix) -> Result<ZeroOneRank> {
    if !m.is_zero_one() {
        return Err(zero_one_error("star_tree_rank_01"));
    }
    let n = m.n();
    let g = ZeroOneGraph::of_dissimilarity(m);
    let c = min_clique_star_cover(&g)?;
    if c.size == 0 {
        // No zeros: the all-ones matrix is a single star tree.
        return Ok(ZeroOneRank {
            value: RankValue::Finite(1),
            lower: 1,
            cover: Some(c.cover),
            decomposition: Some(Decomposition::star(vec![RowVector::new(vec![
                Scalar::new(1, 2);
                n
            ])])),
            infinite_pair: None,
            solid: Some(true),
        });
    }
    let (cover, solid) = match c.solid {
        Some(s) => (s, true),
        None => (c.cover, false),
    };
    let mut vectors: Vec<RowVector> = cover.elements.iter().map(|el| star_element_vector(n, el)).collect();
    let partial = Decomposition::star(vectors.clone());
    let exact = partial.total() == Some(crate::matrix::Matrix::Dissimilarity(m.clone()));
    if !exact {
        vectors.push(RowVector::new(vec![Scalar::new(1, 2); n]));
    }
    let r = c.size;
    Ok(ZeroOneRank {
        value: RankValue::Finite(vectors.len()),
        lower: r,
        cover: Some(cover),
        decomposition: Some(Decomposition::star(vectors)),
        infinite_pair: None,
        solid: Some(solid),
    })
}

/// Maximal complete multipartite subgraphs. For a vertex set `U` the finest
/// admissible partition is into components of the complement on `U` (so
/// non-adjacency is transitive within each part); `U` qualifies with at
/// least two parts.
pub fn maximal_multipartite(g: &ZeroOneGraph) -> Result<Vec<(Vec<Vec<usize>>, Vec<(usize, usize)>)>> {
    check_size(g)?;
    let comp = g.complement();
    let u = Universe::new(g, false)?;
    let mut masks: Vec<(u128, Vec<Vec<usize>>, Vec<(usize, usize)>)> = Vec::new();
    for set in 1u64..(1u64 << g.n) {
        if set.count_ones() < 2 {
            continue;
        }
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut left = set;
        while left != 0 {
            let s = left.trailing_zeros() as usize;
            let mut part = 1u64 << s;
            let mut frontier = part;
            while frontier != 0 {
                let x = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let next = comp.adj[x] & set & !part;
                part |= next;
                frontier |= next;
            }
            left &= !part;
            parts.push(bits(part));
        }
        if parts.len() < 2 {
            continue;
        }
        let el = CoverElement::Multipartite { parts: parts.clone() };
        let edges = el.edges();
        masks.push((u.edge_mask(&edges), parts, edges));
    }
    // Keep edge sets not contained in another. Distinct vertex sets give
    // distinct edge sets, since every vertex of an element has an edge.
    masks.sort_by_key(|(m, _, _)| std::cmp::Reverse(m.count_ones()));
    let mut kept: Vec<(u128, Vec<Vec<usize>>, Vec<(usize, usize)>)> = Vec::new();
    for (m, parts, edges) in masks {
        if kept.iter().any(|(k, _, _)| m & !k == 0) {
            continue;
        }
        kept.push((m, parts, edges));
    }
    kept.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(kept.into_iter().map(|(_, p, e)| (p, e)).collect())
}

/// Minimum cover of the edges by complete multipartite subgraphs.
pub fn min_multipartite_cover(g: &ZeroOneGraph) -> Result<Cover> {
    let u = Universe::new(g, false)?;
    let cands = maximal_multipartite(g)?;
    let sets: Vec<u128> = cands.iter().map(|(_, e)| u.edge_mask(e)).collect();
    let chosen = min_set_cover(&sets, u.full()).expect("edges are multipartite");
    Ok(Cover {
        elements: chosen
            .into_iter()
            .map(|i| CoverElement::Multipartite {
                parts: cands[i].0.clone(),
            })
            .collect(),
    })
}

/// Tree matrix of one multipartite element: a hub `w`, a node per part at
/// distance `-1/2` from the hub, part members hanging at `1/2`, and every
/// other leaf at distance `1` from the hub.
pub fn multipartite_tree_matrix(n: usize, parts: &[Vec<usize>]) -> DissimilarityMatrix {
    let mut part_of = vec![usize::MAX; n];
    for (k, p) in parts.iter().enumerate() {
        for &x in p {
            part_of[x] = k;
        }
    }
    // Distance to the hub: members 0 (1/2 - 1/2), others 1.
    DissimilarityMatrix::from_fn(n, |i, j| match (part_of[i], part_of[j]) {
        (a, b) if a != usize::MAX && a == b => Scalar::ONE,
        (a, b) if a != usize::MAX && b != usize::MAX => Scalar::ZERO,
        (a, b) if a != usize::MAX || b != usize::MAX => Scalar::ONE,
        _ => Scalar::int(2),
    })
}

/// Tree rank of a 0/1 dissimilarity matrix: the minimum multipartite cover
/// size `r`, plus one if `G_M` has at least two isolated vertices.
pub fn tree_rank_01(m: &DissimilarityMatrix) -> Result<ZeroOneRank> {
    if !m.is_zero_one() {
        return Err(zero_one_error("tree_rank_01"));
    }
    let n = m.n();
    let g = ZeroOneGraph::of_dissimilarity(m);
    let cover = min_multipartite_cover(&g)?;
    let mut mats: Vec<DissimilarityMatrix> = cover
        .elements
        .iter()
        .map(|el| match el {
            CoverElement::Multipartite { parts } => multipartite_tree_matrix(n, parts),
            _ => unreachable!(),
        })
        .collect();
    if g.isolated_vertices().len() >= 2 {
        mats.push(DissimilarityMatrix::from_fn(n, |_, _| Scalar::ONE));
    }
    let r = mats.len();
    Ok(ZeroOneRank {
        value: RankValue::Finite(r),
        lower: r,
        cover: Some(cover),
        decomposition: Some(Decomposition::tree(mats)),
        infinite_pair: None,
        solid: None,
    })
}

/// Cover from a clique or independent set of size `k`: a star (all
/// neighbors as leaves) at every vertex outside it, plus the clique itself.
pub fn cover_via_ramsey_witness(g: &ZeroOneGraph, k: usize) -> Option<Cover> {
    let (set, is_clique) = match g.find_clique(k) {
        Some(c) => (c, true),
        None => (g.complement().find_clique(k)?, false),
    };
    let mut elements = Vec::new();
    if is_clique {
        elements.push(CoverElement::Clique { vertices: set.clone() });
    }
    for c in (0..g.n).filter(|v| !set.contains(v)) {
        elements.push(CoverElement::Star {
            center: c,
            leaves: bits(g.neighbors(c)),
        });
    }
    Some(Cover { elements })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_has_rank_one() {
        let m = SymmetricMatrix::from_fn(3, |_, _| Scalar::ONE);
        let r = symmetric_rank_01(&m).unwrap();
        assert_eq!(r.value, RankValue::Finite(1));
    }

    fn cycle(n: usize) -> ZeroOneGraph {
        ZeroOneGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn edgeless_clique_cover_is_singletons() {
        let c = min_clique_cover(&ZeroOneGraph::new(4)).unwrap();
        assert_eq!(c.size(), 4);
    }

    #[test]
    fn five_cycle_covers() {
        let g = cycle(5);
        assert_eq!(min_clique_cover(&g).unwrap().size(), 5);
        assert_eq!(min_clique_star_cover(&g).unwrap().size, 3);
        assert_eq!(min_multipartite_cover(&g).unwrap().size(), 3);
    }

    #[test]
    fn complete_bipartite_is_one_multipartite() {
        let g = ZeroOneGraph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let c = min_multipartite_cover(&g).unwrap();
        assert_eq!(c.size(), 1);
        assert!(c.covers_edges(&g));
    }

    #[test]
    fn lexicographic_witness() {
        // Triangle plus pendant: cliques {0,1,2} and {2,3}.
        let g = ZeroOneGraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        let c = min_clique_cover(&g).unwrap();
        assert_eq!(
            c.elements,
            vec![
                CoverElement::Clique { vertices: vec![0, 1, 2] },
                CoverElement::Clique { vertices: vec![2, 3] },
            ]
        );
    }

    #[test]
    fn ramsey_cover_on_complete_graph() {
        let mut g = ZeroOneGraph::new(5);
        for a in 0..5 {
            for b in a + 1..5 {
                g.add_edge(a, b);
            }
        }
        assert_eq!(cover_via_ramsey_witness(&g, 5).unwrap().size(), 1);
    }
}
