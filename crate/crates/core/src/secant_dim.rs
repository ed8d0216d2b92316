//! Dimensions of the secant sets: the closed forms, and a sampled check
//! that runs the parametrizations from the dimension proofs at a random
//! generic point and measures the rank of the resulting affine map.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{rank_one_symmetric, star_tree_matrix, DissimilarityMatrix, Matrix, RowVector};
use crate::rank::Notion;
use crate::scalar::Scalar;
use crate::tree::scatter_tree;

fn choose2(k: usize) -> usize {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

pub fn ambient_dimension(notion: Notion, n: usize) -> usize {
    match notion {
        Notion::Symmetric => choose2(n + 1),
        Notion::Star | Notion::Tree => choose2(n),
    }
}

pub fn dimension_formula(notion: Notion, n: usize, r: usize) -> usize {
    let sym = choose2(n + 1) - choose2((n + 1).saturating_sub(r));
    match notion {
        Notion::Symmetric => sym,
        Notion::Star => sym.min(choose2(n)),
        Notion::Tree => {
            if 2 * r <= n {
                choose2(n) - choose2(n - 2 * r)
            } else {
                choose2(n)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub notion: Notion,
    pub n: usize,
    pub r: usize,
    pub formula_value: usize,
    pub sampled_value: usize,
    pub ambient: usize,
    /// Number of free parameters of the construction.
    pub parameters: usize,
    /// Summands actually used; more than this adds nothing.
    pub summands: usize,
    pub trials: usize,
    /// Trials whose argmin pattern was not stable and were discarded.
    pub degenerate_trials: usize,
    pub seed: u64,
}

/// A sampled point of a parametrization: parameter values and a map from
/// parameters to summand matrices. Constants that must dominate everything
/// are fixed at the base point so the map stays affine nearby.
struct Sample {
    theta: Vec<Scalar>,
    build: Box<dyn Fn(&[Scalar]) -> Result<Vec<Matrix>>>,
}

/// Per-entry values of the tropical sum and, for each entry, the summand
/// attaining it (`None` on ties).
fn evaluate(summands: &[Matrix]) -> (Vec<Scalar>, Vec<Option<usize>>) {
    let cols: Vec<&[Scalar]> = summands
        .iter()
        .map(|m| match m {
            Matrix::Symmetric(s) => s.entries(),
            Matrix::Dissimilarity(d) => d.entries(),
        })
        .collect();
    let len = cols[0].len();
    let mut values = Vec::with_capacity(len);
    let mut argmin = Vec::with_capacity(len);
    for e in 0..len {
        let best = cols.iter().map(|c| c[e]).min().expect("at least one summand");
        let at: Vec<usize> = (0..cols.len()).filter(|&k| cols[k][e] == best).collect();
        values.push(best);
        argmin.push((at.len() == 1).then(|| at[0]));
    }
    (values, argmin)
}

/// Rank of the local affine map, or `None` when the argmin pattern is not
/// unique or moves under a unit change of some parameter.
fn local_rank(s: &Sample) -> Result<Option<usize>> {
    let (base, pattern) = evaluate(&(s.build)(&s.theta)?);
    if pattern.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut columns = Vec::with_capacity(s.theta.len());
    for k in 0..s.theta.len() {
        let mut moved = None;
        for delta in [1, -1] {
            let mut t = s.theta.clone();
            t[k] = t[k] + Scalar::int(delta);
            let (values, p) = evaluate(&(s.build)(&t)?);
            if p != pattern {
                return Ok(None);
            }
            if delta == 1 {
                moved = Some(values.iter().zip(&base).map(|(a, b)| *a - *b).collect::<Vec<_>>());
            }
        }
        columns.push(moved.expect("delta 1 ran"));
    }
    Ok(Some(matrix_rank(&columns)))
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn matrix_rank(rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let d = Scalar::common_denominator(row);
            row.iter()
                .map(|x| BigInt::from(x.numer()) * BigInt::from(d / x.denom()))
                .collect()
        })
        .collect();
    let (m, n) = (a.len(), a[0].len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m {
            for j in col + 1..n {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

fn pick(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    Scalar::int(rng.gen_range(lo..hi))
}

/// Vectors `v_i = (C, ..., C, v_ii, ..., v_in)` with each vector below the
/// previous one in every coordinate.
fn symmetric_sample(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Sample {
    const BAND: i64 = 1000;
    let mut theta = Vec::new();
    for i in 0..r {
        for _ in i..n {
            let top = -(i as i64) * BAND;
            theta.push(pick(rng, top - BAND / 2, top));
        }
    }
    let c = Scalar::int(4 * BAND * (r as i64 + 1));
    let build = move |t: &[Scalar]| -> Result<Vec<Matrix>> {
        let mut k = 0;
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let mut v = vec![c; n];
            for x in v.iter_mut().skip(i) {
                *x = t[k];
                k += 1;
            }
            out.push(Matrix::Symmetric(rank_one_symmetric(&RowVector::new(v))));
        }
        Ok(out)
    };
    Sample {
        theta,
        build: Box::new(build),
    }
}

/// Vectors from the ordered-pair scheme: coordinates past `r` are small on
/// the pair assigned to the vector and large elsewhere; coordinates
/// `k..=r` of `v_k` grow fast as `k` decreases; the rest are `C`.
fn star_sample(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Sample {
    // Coordinates are 0-based: the first `r` indices are the ones below `r`.
    let tail: Vec<(usize, usize)> = (r..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut value = vec![vec![None::<Scalar>; n]; r];
    for (k, row) in value.iter_mut().enumerate() {
        for (i, slot) in row.iter_mut().enumerate().skip(r) {
            let small = tail.get(k).is_some_and(|&(a, b)| a == i || b == i);
            *slot = Some(if small { pick(rng, 100, 200) } else { pick(rng, 400, 10_000) });
        }
    }
    let mut top = value
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(Scalar::int(0));
    for k in (0..r).rev() {
        let mut chosen = top;
        for i in k..r {
            let x = if k == r - 1 {
                pick(rng, 0, 10_000)
            } else {
                top.times(2) + pick(rng, 1000, 2000)
            };
            value[k][i] = Some(x);
            chosen = chosen.max(x);
        }
        top = chosen;
    }
    let mut theta = Vec::new();
    for (k, row) in value.iter().enumerate() {
        theta.extend(row[k..].iter().map(|x| x.expect("filled")));
    }
    let c = top.times(4);
    let build = move |t: &[Scalar]| -> Result<Vec<Matrix>> {
        let mut idx = 0;
        let mut out = Vec::with_capacity(r);
        for k in 0..r {
            let mut v = vec![c; n];
            for x in v.iter_mut().skip(k) {
                *x = t[idx];
                idx += 1;
            }
            out.push(Matrix::Dissimilarity(star_tree_matrix(&RowVector::new(v))));
        }
        Ok(out)
    };
    Sample {
        theta,
        build: Box::new(build),
    }
}

/// Distances of the caterpillar with leaves in the order
/// `a_1, a_3, ..., a_m, a_2`, pendant weights `p` and internal weights `q`
/// (one fewer than the number of spine vertices).
fn caterpillar(m: usize, p: &[Scalar], q: &[Scalar]) -> DissimilarityMatrix {
    // Leaf a_t (0-based t) sits at spine vertex `spine(t)`.
    let spine = |t: usize| -> usize {
        match t {
            0 => 0,
            1 => m.saturating_sub(3),
            _ => t - 2,
        }
    };
    DissimilarityMatrix::from_fn(m, |i, j| {
        let (a, b) = (spine(i).min(spine(j)), spine(i).max(spine(j)));
        q[a..b].iter().fold(p[i] + p[j], |acc, x| acc + *x)
    })
}

/// One caterpillar per level on the indices `2l..n`, deeper levels far
/// below the outer ones, each padded to `n` leaves.
fn tree_sample(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Sample {
    const SPREAD: i64 = 1000;
    const LEVEL: i64 = 1_000_000;
    let levels: Vec<usize> = (0..r).map(|l| n - 2 * l).filter(|&m| m >= 2).collect();
    let mut theta = Vec::new();
    for (l, &m) in levels.iter().enumerate() {
        let base = -(l as i64) * LEVEL;
        theta.extend((0..m).map(|_| pick(rng, base, base + SPREAD)));
        theta.extend((0..m.saturating_sub(3)).map(|_| pick(rng, -SPREAD, 0)));
    }
    let c = Scalar::int(4 * LEVEL * (levels.len() as i64 + 1));
    let build = move |t: &[Scalar]| -> Result<Vec<Matrix>> {
        let mut off = 0;
        let mut out = Vec::with_capacity(levels.len());
        for (l, &m) in levels.iter().enumerate() {
            let p = &t[off..off + m];
            let q = &t[off + m..off + m + m.saturating_sub(3)];
            off += m + m.saturating_sub(3);
            let cat = caterpillar(m, p, q);
            let idx: Vec<usize> = (2 * l..n).collect();
            out.push(Matrix::Dissimilarity(scatter_tree(&cat, &idx, n, c)?));
        }
        Ok(out)
    };
    Sample {
        theta,
        build: Box::new(build),
    }
}

/// Number of summands the construction uses for rank `r`.
pub fn summands_used(notion: Notion, n: usize, r: usize) -> usize {
    match notion {
        Notion::Symmetric | Notion::Star => r.min(n),
        Notion::Tree => (0..r).filter(|&l| n >= 2 * l + 2).count(),
    }
}

pub fn sampled_local_dimension(notion: Notion, n: usize, r: usize, trials: usize, seed: u64) -> Result<DimensionReport> {
    let min_n = if notion == Notion::Symmetric { 1 } else { 3 };
    if r == 0 || n < min_n {
        return Err(Error::Precondition(format!("need r >= 1 and n >= {min_n}")));
    }
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let used = summands_used(notion, n, r);
    let mut best = None;
    let mut degenerate = 0;
    let mut parameters = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(trial as u64));
        let s = match notion {
            Notion::Symmetric => symmetric_sample(n, used, &mut rng),
            Notion::Star => star_sample(n, used, &mut rng),
            Notion::Tree => tree_sample(n, used, &mut rng),
        };
        parameters = s.theta.len();
        match local_rank(&s)? {
            Some(d) => best = Some(best.map_or(d, |b: usize| b.max(d))),
            None => degenerate += 1,
        }
    }
    let sampled = best.ok_or_else(|| {
        Error::Verification(format!("all {trials} samples were degenerate"))
    })?;
    Ok(DimensionReport {
        notion,
        n,
        r,
        formula_value: dimension_formula(notion, n, r),
        sampled_value: sampled,
        ambient: ambient_dimension(notion, n),
        parameters,
        summands: used,
        trials,
        degenerate_trials: degenerate,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::is_tree_matrix;

    #[test]
    fn formula_values() {
        assert_eq!(dimension_formula(Notion::Symmetric, 4, 1), 4);
        assert_eq!(dimension_formula(Notion::Tree, 5, 2), 10);
        assert_eq!(dimension_formula(Notion::Star, 5, 3), 10);
        assert_eq!(dimension_formula(Notion::Star, 5, 2), 9);
        assert_eq!(dimension_formula(Notion::Tree, 6, 2), 14);
    }

    #[test]
    fn bareiss_rank() {
        let rows = vec![
            vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)],
            vec![Scalar::int(2), Scalar::int(4), Scalar::int(6)],
            vec![Scalar::int(0), Scalar::int(1), Scalar::new(1, 2)],
        ];
        assert_eq!(matrix_rank(&rows), 2);
    }

    #[test]
    fn caterpillar_is_tree_and_recovers_weights() {
        let p: Vec<Scalar> = [5, 7, 3, 9, 4].iter().map(|&x| Scalar::int(x)).collect();
        let q: Vec<Scalar> = [-1, -2].iter().map(|&x| Scalar::int(x)).collect();
        let m = caterpillar(5, &p, &q);
        assert!(is_tree_matrix(&m));
        // q_i from the first two rows, 0-based leaves: 0 and 1 are the ends.
        let q0 = (m.get(0, 3) + m.get(1, 2) - m.get(0, 2) - m.get(1, 3)).half();
        assert_eq!(q0, Scalar::int(-1));
    }

    #[test]
    fn sampled_examples() {
        let d = |nt, n, r| sampled_local_dimension(nt, n, r, 5, 1).unwrap().sampled_value;
        assert_eq!(d(Notion::Symmetric, 4, 2), 7);
        assert_eq!(d(Notion::Star, 5, 2), 9);
        assert_eq!(d(Notion::Tree, 6, 2), 14);
    }
}
