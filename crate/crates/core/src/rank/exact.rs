//! Exact rank by searching for a cover of all positions by `r` feasible
//! classes, for increasing `r`.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::coloring::{chromatic_number, Graph};
use crate::deficiency::{build_deficiency, chromatic_number_limited};
use crate::error::Result;
use crate::matrix::Matrix;

use super::oracle::Instance;
use super::{Decomposition, Notion, RankValue};

#[derive(Clone, Debug)]
pub struct ExactOptions {
    /// Largest `r` tried.
    pub budget: usize,
    pub time_limit: Option<Duration>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            budget: 64,
            time_limit: None,
        }
    }
}

/// Why no smaller rank is possible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowerCertificate {
    /// The deficiency chromatic number already equals the rank.
    Coloring { chromatic_number: usize },
    /// Some position cannot be attained by any summand.
    InfinitePair { i: usize, j: usize },
    /// Exhaustive search found no cover with `below` classes.
    Exhaustion {
        below: usize,
        chromatic_number: Option<usize>,
        conflict_bound: usize,
    },
    /// Rank one: nothing to rule out.
    Trivial,
    /// A characterization valid for this size.
    ClosedForm { classifier: String },
    /// Minimum cover size of the zero pattern of a 0/1 matrix.
    Cover { size: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactResult {
    pub notion: Notion,
    /// `None` when the budget or time limit ran out first.
    pub value: Option<RankValue>,
    /// Every rank below this is ruled out.
    pub lower: usize,
    pub lower_certificate: Option<LowerCertificate>,
    pub decomposition: Option<Decomposition>,
    /// Exact deficiency chromatic number, when it was computed in time.
    pub deficiency_chromatic: Option<usize>,
    pub nodes: u64,
}

pub fn exact_rank(m: &Matrix, notion: Notion, opts: &ExactOptions) -> Result<ExactResult> {
    let start = Instant::now();
    let deadline = opts.time_limit.map(|t| start + t);
    let inst = Instance::new(m, notion)?;
    let p = inst.len();
    let mut result = ExactResult {
        notion,
        value: None,
        lower: 1,
        lower_certificate: None,
        decomposition: None,
        deficiency_chromatic: None,
        nodes: 0,
    };

    for k in 0..p {
        if !inst.feasible(1 << k) {
            let (i, j) = inst.positions[k];
            result.value = Some(RankValue::Infinite);
            result.lower = usize::MAX;
            result.lower_certificate = Some(LowerCertificate::InfinitePair { i: i + 1, j: j + 1 });
            return Ok(result);
        }
    }

    let chi = if inst.n >= 3 || notion == Notion::Symmetric {
        let h = build_deficiency(m, notion.basis())?;
        let c = chromatic_number_limited(&h, opts.time_limit);
        c.exact.then(|| c.value.finite()).flatten()
    } else {
        None
    };
    result.deficiency_chromatic = chi;

    // Pairs that no single summand can attain together.
    let mut conflict = vec![0u64; p];
    let mut g = Graph::new(p);
    for a in 0..p {
        for b in a + 1..p {
            if !inst.feasible(1 << a | 1 << b) {
                conflict[a] |= 1 << b;
                conflict[b] |= 1 << a;
                g.add_edge(a, b);
            }
        }
    }
    let gc = chromatic_number(&g);
    let conflict_bound = gc.lower;
    let mut lower = conflict_bound.max(chi.unwrap_or(1)).max(1);

    // Clique first (its colors are forced), then by conflict degree.
    let mut order: Vec<usize> = gc.clique.clone();
    let mut rest: Vec<usize> = (0..p).filter(|x| !order.contains(x)).collect();
    rest.sort_by_key(|&x| (std::cmp::Reverse(conflict[x].count_ones()), x));
    order.extend(rest);

    let mut search = Search {
        inst: &inst,
        order,
        conflict,
        classes: Vec::new(),
        r: 0,
        nodes: 0,
        deadline,
        timed_out: false,
    };
    let mut r = lower;
    while r <= opts.budget {
        search.r = r;
        search.classes.clear();
        if search.dfs(0) {
            let classes = search.classes.clone();
            result.value = Some(RankValue::Finite(r));
            result.lower = r;
            result.lower_certificate = Some(match chi {
                Some(c) if c == r => LowerCertificate::Coloring { chromatic_number: c },
                _ => LowerCertificate::Exhaustion {
                    below: r,
                    chromatic_number: chi,
                    conflict_bound,
                },
            });
            result.decomposition = Some(witnesses(&inst, &classes));
            result.nodes = search.nodes;
            return Ok(result);
        }
        if search.timed_out {
            break;
        }
        r += 1;
        lower = r;
    }
    result.lower = lower;
    result.nodes = search.nodes;
    Ok(result)
}

fn witnesses(inst: &Instance, classes: &[u64]) -> Decomposition {
    match inst.notion {
        Notion::Symmetric => Decomposition::symmetric(
            classes
                .iter()
                .map(|&c| inst.vector_witness(c).expect("feasible class"))
                .collect(),
        ),
        Notion::Star => Decomposition::star(
            classes
                .iter()
                .map(|&c| inst.vector_witness(c).expect("feasible class"))
                .collect(),
        ),
        Notion::Tree => Decomposition::tree(
            classes
                .iter()
                .map(|&c| inst.tree_witness(c).expect("feasible class"))
                .collect(),
        ),
    }
}

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    conflict: Vec<u64>,
    classes: Vec<u64>,
    r: usize,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return false;
        }
        if self.classes.len() == self.r {
            // Every remaining position needs a class it does not conflict with.
            for &q in &self.order[k..] {
                if self.classes.iter().all(|&c| c & self.conflict[q] != 0) {
                    return false;
                }
            }
        }
        let p = self.order[k];
        for c in 0..self.classes.len() {
            if self.classes[c] & self.conflict[p] != 0 {
                continue;
            }
            let m = self.classes[c] | 1 << p;
            if self.inst.feasible(m) {
                self.classes[c] = m;
                if self.dfs(k + 1) {
                    return true;
                }
                self.classes[c] ^= 1 << p;
            }
        }
        if self.classes.len() < self.r {
            self.classes.push(1 << p);
            if self.dfs(k + 1) {
                return true;
            }
            self.classes.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{project, SymmetricMatrix};
    use crate::rank::verify;

    fn intro() -> SymmetricMatrix {
        SymmetricMatrix::from_ints(&[
            &[0, 0, 0, 0],
            &[0, 0, 1, 1],
            &[0, 1, 0, 1],
            &[0, 1, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn small_symmetric_example() {
        let m = Matrix::Symmetric(intro());
        let r = exact_rank(&m, Notion::Symmetric, &ExactOptions::default()).unwrap();
        let d = r.decomposition.unwrap();
        assert!(verify(&m, &d).ok);
        assert_eq!(Some(RankValue::Finite(d.len())), r.value);
    }

    #[test]
    fn star_and_tree_of_projection() {
        let p = Matrix::Dissimilarity(project(&intro()).unwrap());
        for notion in [Notion::Star, Notion::Tree] {
            let r = exact_rank(&p, notion, &ExactOptions::default()).unwrap();
            assert!(verify(&p, r.decomposition.as_ref().unwrap()).ok);
        }
    }

    #[test]
    fn infinite_symmetric_rank() {
        let m = Matrix::Symmetric(SymmetricMatrix::from_ints(&[&[0, -1], &[-1, 0]]).unwrap());
        let r = exact_rank(&m, Notion::Symmetric, &ExactOptions::default()).unwrap();
        assert_eq!(r.value, Some(RankValue::Infinite));
        assert_eq!(r.lower_certificate, Some(LowerCertificate::InfinitePair { i: 1, j: 2 }));
    }
}
