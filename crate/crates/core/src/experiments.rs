//! Randomized experiments around open questions. They report what they
//! find and assert nothing.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{random_tree_matrix, random_with, tree_rank_six, Kind};
use crate::covers::star_tree_rank_01;
use crate::deficiency::{build_deficiency, chromatic_number_limited};
use crate::error::Result;
use crate::io::format_matrix;
use crate::matrix::{DissimilarityMatrix, Matrix};
use crate::polynomial::Basis;
use crate::rank::exact::{exact_rank, ExactOptions};
use crate::rank::{Notion, RankValue};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TenMode {
    /// Uniform entries in `0..=9`.
    Uniform,
    /// The 9x9 chromatic-number-6 example with a random tenth row.
    Extend,
}

#[derive(Clone, Debug, Serialize)]
pub struct TenReport {
    pub mode: TenMode,
    pub samples: usize,
    pub seed: u64,
    /// Number of samples per chromatic number, index = chromatic number.
    pub histogram: Vec<usize>,
    /// Samples whose coloring was cut off by the time limit.
    pub cut_off: usize,
    /// Matrices with chromatic number at least 7, in matrix-file format.
    pub candidates: Vec<String>,
}

/// Random 10x10 matrices whose Pluecker deficiency graph needs 7 colors
/// would have tree rank 7, the largest rank allowed at this size.
pub fn search_ten(mode: TenMode, samples: usize, seed: u64, per_sample: Duration) -> Result<TenReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = tree_rank_six();
    let mut report = TenReport {
        mode,
        samples,
        seed,
        histogram: vec![0; 11],
        cut_off: 0,
        candidates: Vec::new(),
    };
    for _ in 0..samples {
        let m = match mode {
            TenMode::Uniform => random_with(&mut rng, Kind::Dissimilarity, 10, 0, 9),
            TenMode::Extend => {
                let row: Vec<i64> = (0..9).map(|_| rng.gen_range(0..=9)).collect();
                Matrix::Dissimilarity(DissimilarityMatrix::from_fn(10, |i, j| match (i, j) {
                    (9, k) | (k, 9) => Scalar::int(row[k]),
                    _ => base.get(i, j),
                }))
            }
        };
        let h = build_deficiency(&m, Basis::Pluecker)?;
        let c = chromatic_number_limited(&h, Some(per_sample));
        let chi = c.value.finite().unwrap_or(0);
        if !c.exact {
            report.cut_off += 1;
        }
        report.histogram[chi.min(10)] += 1;
        if chi >= 7 {
            report.candidates.push(format_matrix(&m));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PrincipalSixReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Samples whose principal 6x6 submatrices all have tree rank <= 2.
    pub all_six_at_most_two: usize,
    /// Of those, how many have tree rank <= 2 themselves.
    pub whole_at_most_two: usize,
    /// Samples where some search ran out of time.
    pub undecided: usize,
    /// Matrices with every 6x6 principal submatrix of tree rank <= 2 but
    /// tree rank > 2.
    pub counterexamples: Vec<String>,
}

fn tree_rank_at_most_two(m: &DissimilarityMatrix, limit: Duration) -> Result<Option<bool>> {
    let opts = ExactOptions {
        budget: 2,
        time_limit: Some(limit),
    };
    let r = exact_rank(&Matrix::Dissimilarity(m.clone()), Notion::Tree, &opts)?;
    Ok(match r.value {
        Some(RankValue::Finite(k)) => Some(k <= 2),
        Some(RankValue::Infinite) => Some(false),
        None if r.lower > 2 => Some(false),
        None => None,
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Does tree rank <= 2 follow from tree rank <= 2 of every principal 6x6
/// submatrix? Samples are sums of two random tree matrices with one entry
/// nudged, so that many of them sit near the rank-2 boundary.
pub fn principal_six(n: usize, samples: usize, seed: u64, per_search: Duration) -> Result<PrincipalSixReport> {
    assert!(n >= 7, "the question is about matrices larger than 6x6");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PrincipalSixReport {
        n,
        samples,
        seed,
        all_six_at_most_two: 0,
        whole_at_most_two: 0,
        undecided: 0,
        counterexamples: Vec::new(),
    };
    let subs = subsets(n, 6);
    'sample: for _ in 0..samples {
        let a = random_tree_matrix(&mut rng, n, 0, 9);
        let b = random_tree_matrix(&mut rng, n, 0, 9);
        let mut m = a.trop_sum(&b)?;
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        m = m.with_entry(i, j, m.get(i, j) + Scalar::int(rng.gen_range(-3..=3)));
        for idx in &subs {
            match tree_rank_at_most_two(&m.principal(idx), per_search)? {
                Some(true) => {}
                Some(false) => continue 'sample,
                None => {
                    report.undecided += 1;
                    continue 'sample;
                }
            }
        }
        report.all_six_at_most_two += 1;
        match tree_rank_at_most_two(&m, per_search)? {
            Some(true) => report.whole_at_most_two += 1,
            Some(false) => report.counterexamples.push(format_matrix(&Matrix::Dissimilarity(m))),
            None => report.undecided += 1,
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiReport {
    pub notion: Notion,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Instances where the deficiency chromatic number equals the rank.
    pub equal: usize,
    /// Instances where it is strictly smaller.
    pub strict: Vec<String>,
    pub undecided: usize,
}

/// How often the deficiency chromatic number equals the exact rank.
pub fn chi_versus_rank(notion: Notion, n: usize, samples: usize, seed: u64, lo: i64, hi: i64) -> Result<ChiReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = if notion == Notion::Symmetric {
        Kind::Symmetric
    } else {
        Kind::Dissimilarity
    };
    let mut report = ChiReport {
        notion,
        n,
        samples,
        seed,
        equal: 0,
        strict: Vec::new(),
        undecided: 0,
    };
    for _ in 0..samples {
        let m = random_with(&mut rng, kind, n, lo, hi);
        let r = exact_rank(&m, notion, &ExactOptions::default())?;
        let (Some(value), Some(chi)) = (r.value, r.deficiency_chromatic) else {
            if r.value == Some(RankValue::Infinite) {
                report.equal += 1;
            } else {
                report.undecided += 1;
            }
            continue;
        };
        if value == RankValue::Finite(chi) {
            report.equal += 1;
        } else {
            report.strict.push(format_matrix(&m));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SolidReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Samples with no solid minimum clique/star cover.
    pub unsolid: usize,
    /// Of those, how many still have star tree rank equal to the cover size.
    pub rank_equals_cover: Vec<String>,
    pub undecided: usize,
}

/// Is solidity needed? Random 0/1 matrices with no solid minimum cover,
/// compared against the exact star tree rank.
pub fn solid_gap(n: usize, samples: usize, seed: u64, density: f64) -> Result<SolidReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SolidReport {
        n,
        samples,
        seed,
        unsolid: 0,
        rank_equals_cover: Vec::new(),
        undecided: 0,
    };
    for _ in 0..samples {
        let d = DissimilarityMatrix::from_fn(n, |_, _| Scalar::int(rng.gen_bool(density) as i64));
        let zr = star_tree_rank_01(&d)?;
        if zr.solid != Some(false) {
            continue;
        }
        report.unsolid += 1;
        let m = Matrix::Dissimilarity(d);
        match exact_rank(&m, Notion::Star, &ExactOptions::default())?.value {
            Some(v) if v == RankValue::Finite(zr.lower) => report.rank_equals_cover.push(format_matrix(&m)),
            Some(_) => {}
            None => report.undecided += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_extension_runs() {
        let r = search_ten(TenMode::Extend, 2, 1, Duration::from_secs(5)).unwrap();
        assert_eq!(r.histogram.iter().sum::<usize>(), 2);
        // Extensions contain the 9x9 example, whose graph needs 6 colors.
        assert!(r.histogram[..6].iter().all(|&c| c == 0));
    }

    #[test]
    fn chi_report_counts_everything() {
        let r = chi_versus_rank(Notion::Tree, 5, 20, 2, 0, 9).unwrap();
        assert_eq!(r.equal + r.strict.len() + r.undecided, 20);
    }

    #[test]
    fn solid_gap_finds_unsolid_samples() {
        let r = solid_gap(6, 200, 3, 0.55).unwrap();
        assert!(r.unsolid > 0);
        assert_eq!(r.undecided, 0);
    }
}
