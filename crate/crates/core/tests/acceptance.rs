//! Acceptance criteria, one line of output each. Runs as its own test
//! binary (`cargo test --test acceptance`) and exits nonzero if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropical_rank::catalog::{self, random_finite_symmetric, random_with, Kind};
use tropical_rank::deficiency::{
    build_deficiency, chromatic_number, chromatic_number_limited, classify_petersen, has_alternating_even_cycle,
    induced_chromatic_number, PetersenClass,
};
use tropical_rank::matrix::project;
use tropical_rank::rank::construct::{tree_upper_decomposition, upper_decomposition};
use tropical_rank::rank::exact::{exact_rank, ExactOptions};
use tropical_rank::rank::{rank, Generator, Method, Notion, RankOptions, RankValue};
use tropical_rank::secant_dim::sampled_local_dimension;
use tropical_rank::small_cases::{star5_rank2_test, sym3_rank, tree5_rank};
use tropical_rank::{DissimilarityMatrix, Matrix, Scalar, SymmetricMatrix};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            pass: true,
            detail: summary,
        }
    } else {
        let shown: Vec<&String> = failures.iter().take(5).collect();
        Outcome {
            pass: false,
            detail: format!("{} failures, e.g. {shown:?}", failures.len()),
        }
    }
}

fn exact(m: &Matrix, notion: Notion) -> RankValue {
    exact_rank(m, notion, &ExactOptions::default())
        .unwrap()
        .value
        .expect("no budget or time limit")
}

fn rank_with(m: &Matrix, notion: Notion, method: Method) -> Option<RankValue> {
    rank(
        m,
        notion,
        &RankOptions {
            method,
            ..RankOptions::default()
        },
    )
    .unwrap()
    .value
}

fn expect(bad: &mut Vec<String>, what: String, got: Option<RankValue>, want: usize) {
    if got != Some(RankValue::Finite(want)) {
        bad.push(format!("{what}: got {got:?}, want {want}"));
    }
}

/// Tropical determinant minimum attained at least twice.
fn singular_3x3(m: &SymmetricMatrix) -> bool {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut terms: Vec<Scalar> = perms
        .iter()
        .map(|p| m.get(0, p[0]) + m.get(1, p[1]) + m.get(2, p[2]))
        .collect();
    terms.sort();
    terms[0] == terms[1]
}

fn regression_table() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();

    let intro = Matrix::Symmetric(catalog::intro_symmetric());
    let intro_d = catalog::intro_dissimilarity();
    let intro_p = Matrix::Dissimilarity(intro_d.clone());
    expect(&mut bad, "intro sym".into(), rank_with(&intro, Notion::Symmetric, Method::Exact), 4);
    let star = rank(&intro_p, Notion::Star, &RankOptions::default()).unwrap();
    expect(&mut bad, "intro star".into(), star.value, 2);
    match &star.upper_certificate {
        Some(d) if d.len() == 2 && common::check(&intro_p, d).is_ok() => {}
        _ => bad.push("intro star: no verified 2-term decomposition".into()),
    }
    expect(&mut bad, "intro tree".into(), rank_with(&intro_p, Notion::Tree, Method::Exact), 1);
    let tree = tree_upper_decomposition(&intro_d).unwrap();
    match tree.summands.first().and_then(|s| s.generator.as_ref()) {
        Some(Generator::Tree(t)) if tree.len() == 1 => {
            if common::newick_distances(&t.to_newick(), 4) != intro_d {
                bad.push("intro tree: Newick distances differ".into());
            }
        }
        _ => bad.push("intro tree: no single tree summand".into()),
    }

    for n in 3..=7 {
        let m = catalog::min_matrix(n);
        let method = if n <= 6 { Method::Exact } else { Method::Bounds };
        expect(&mut bad, format!("min n={n} star"), rank_with(&m.clone().into(), Notion::Star, method), n - 2);
        if !common::four_point(&m) {
            bad.push(format!("min n={n} is not a tree matrix"));
        }
    }
    for n in 4..=6 {
        let m: Matrix = catalog::bipartite(n).into();
        for method in [Method::Auto, Method::Exact] {
            expect(&mut bad, format!("bipartite n={n} {method:?}"), rank_with(&m, Notion::Symmetric, method), n * n / 4);
        }
    }
    for n in 3..=6 {
        let m: Matrix = catalog::identity_pattern(n).into();
        for method in [Method::Auto, Method::Exact] {
            expect(&mut bad, format!("identity n={n} {method:?}"), rank_with(&m, Notion::Symmetric, method), n);
        }
    }
    let s6 = catalog::singular_minors_rank_four();
    expect(&mut bad, "4x4 singular minors".into(), rank_with(&s6.clone().into(), Notion::Symmetric, Method::Exact), 4);
    for skip in 0..4 {
        let idx: Vec<usize> = (0..4).filter(|&x| x != skip).collect();
        if !singular_3x3(&s6.principal(&idx)) {
            bad.push(format!("4x4 minor without {} not singular", skip + 1));
        }
    }

    let c5 = catalog::cycle(5);
    let c5m: Matrix = c5.clone().into();
    expect(&mut bad, "C5 star".into(), rank_with(&c5m, Notion::Star, Method::Exact), 3);
    expect(&mut bad, "C5 tree".into(), rank_with(&c5m, Notion::Tree, Method::Exact), 3);
    let cls = classify_petersen(&c5).unwrap();
    let chi = chromatic_number(&build_deficiency(&c5m, tropical_rank::polynomial::Basis::Pluecker).unwrap());
    if cls.class != PetersenClass::FiveCycle || chi.value != RankValue::Finite(3) {
        bad.push(format!("C5 deficiency: {:?}, chi {:?}", cls.class, chi.value));
    }

    let t = Instant::now();
    let tr6 = catalog::tree_rank_six();
    let h = build_deficiency(&tr6.clone().into(), tropical_rank::polynomial::Basis::Pluecker).unwrap();
    let c = chromatic_number_limited(&h, Some(Duration::from_secs(60)));
    if !(c.exact && c.value == RankValue::Finite(6)) || t.elapsed() > Duration::from_secs(60) {
        bad.push(format!("tr6 chi: {:?} exact={}", c.value, c.exact));
    }
    let d = tree_upper_decomposition(&tr6).unwrap();
    if d.len() != 6 || common::check(&tr6.clone().into(), &d).is_err() {
        bad.push(format!("tr6 decomposition of size {}", d.len()));
    }

    let m2 = catalog::tree_rank_six_blocks(2);
    let h2 = build_deficiency(&m2.into(), tropical_rank::polynomial::Basis::Pluecker).unwrap();
    let c2 = chromatic_number_limited(&h2, Some(Duration::from_secs(120)));
    let lower = c2.value.finite().unwrap_or(0);
    if lower < 12 {
        // The two in-block copies alone force 12 colors.
        let inside: Vec<usize> = (0..h2.vertices.len())
            .filter(|&v| h2.vertices[v].0 / 9 == h2.vertices[v].1 / 9)
            .collect();
        if induced_chromatic_number(&h2, &inside).unwrap_or(0) < 12 {
            bad.push(format!("M2 chi bound {lower}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        bad.push(format!("took {elapsed:?}"));
    }
    outcome(
        bad,
        format!(
            "all rows match; tr6 chi 6, M2 chi {} ({})",
            lower,
            if c2.exact { "exact" } else { "clique bound" }
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut n5, mut n3) = (0, 0);
    for k in 0..1000 {
        let m = random_with(&mut rng, Kind::Dissimilarity, 5, 0, 9);
        let Matrix::Dissimilarity(d) = &m else { unreachable!() };
        let tree = exact(&m, Notion::Tree);
        let closed = tree5_rank(d).unwrap().value;
        if tree != closed {
            bad.push(format!("tree #{k}: exact {tree:?}, closed form {closed:?}"));
        }
        let star = exact(&m, Notion::Star);
        let test = star5_rank2_test(d).unwrap().passes;
        if test != (star <= RankValue::Finite(2)) {
            bad.push(format!("star #{k}: exact {star:?}, test {test}"));
        }
        n5 += 1;
    }
    for k in 0..1000 {
        // Half uniform (mostly infinite rank), half of finite rank.
        let s = if k % 2 == 0 {
            match random_with(&mut rng, Kind::Symmetric, 3, -9, 9) {
                Matrix::Symmetric(s) => s,
                _ => unreachable!(),
            }
        } else {
            random_finite_symmetric(&mut rng, 3, 0, 9)
        };
        let e = exact(&s.clone().into(), Notion::Symmetric);
        let closed = sym3_rank(&s).unwrap().value;
        if e != closed {
            bad.push(format!("sym #{k}: exact {e:?}, closed form {closed:?}"));
        }
        n3 += 1;
    }
    if start.elapsed() > Duration::from_secs(300) {
        bad.push(format!("took {:?}", start.elapsed()));
    }
    outcome(bad, format!("{n5} 5x5 and {n3} 3x3 instances, zero discrepancies"))
}

fn chain_inequality() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut count = 0;
    for n in [4, 5] {
        for k in 0..500 {
            let s = random_finite_symmetric(&mut rng, n, 0, 9);
            let p: Matrix = project(&s).unwrap().into();
            let sym = exact(&s.into(), Notion::Symmetric);
            let star = exact(&p, Notion::Star);
            let tree = exact(&p, Notion::Tree);
            if !(sym >= star && star >= tree) || sym.is_infinite() {
                bad.push(format!("n={n} #{k}: {sym:?} {star:?} {tree:?}"));
            }
            count += 1;
        }
    }
    outcome(bad, format!("{count} instances, sym >= star >= tree everywhere"))
}

fn construction_soundness() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut six_sizes = [0usize; 4];
    for notion in [Notion::Symmetric, Notion::Star, Notion::Tree] {
        for k in 0..500 {
            let n = 3 + k % 5;
            let m: Matrix = match notion {
                Notion::Symmetric => random_finite_symmetric(&mut rng, n, -20, 20).into(),
                _ => random_with(&mut rng, Kind::Dissimilarity, n, -20, 20),
            };
            let bound = match notion {
                Notion::Symmetric => n.max(n * n / 4),
                Notion::Star => n - 2,
                // Below 6 the largest tree rank is n - 2.
                Notion::Tree if n < 6 => n - 2,
                Notion::Tree => n - 3,
            };
            let d = upper_decomposition(&m, notion).unwrap();
            if let Err(e) = common::check(&m, &d) {
                bad.push(format!("{notion:?} n={n} #{k}: {e}"));
            }
            if d.len() > bound {
                bad.push(format!("{notion:?} n={n} #{k}: size {} > {bound}", d.len()));
            }
            if notion == Notion::Tree && n == 6 {
                six_sizes[d.len().min(3)] += 1;
            }
        }
    }
    outcome(
        bad,
        format!(
            "1500 decompositions verified within bounds; n=6 tree sizes 1/2/3: {}/{}/{}",
            six_sizes[1], six_sizes[2], six_sizes[3]
        ),
    )
}

fn lower_bound_soundness() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut total, mut equal) = (0, 0);
    let mut check = |m: &Matrix, notion: Notion, label: String| {
        let r = exact(m, notion);
        let chi = chromatic_number(&build_deficiency(m, notion.basis()).unwrap()).value;
        if chi > r {
            bad.push(format!("{label}: chi {chi:?} > rank {r:?}"));
        }
        total += 1;
        if chi == r {
            equal += 1;
        }
    };
    // Same instances as the oracle criterion.
    for k in 0..1000 {
        let m = random_with(&mut rng, Kind::Dissimilarity, 5, 0, 9);
        check(&m, Notion::Tree, format!("tree #{k}"));
        check(&m, Notion::Star, format!("star #{k}"));
    }
    for k in 0..1000 {
        let s: Matrix = if k % 2 == 0 {
            random_with(&mut rng, Kind::Symmetric, 3, -9, 9)
        } else {
            random_finite_symmetric(&mut rng, 3, 0, 9).into()
        };
        check(&s, Notion::Symmetric, format!("sym #{k}"));
    }
    outcome(
        bad,
        format!("chi <= rank on {total} instances; equality on {equal}/{total}"),
    )
}

fn dimension_verification() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for notion in [Notion::Symmetric, Notion::Star, Notion::Tree] {
        for n in 3..=7 {
            let rmax = if notion == Notion::Tree { n / 2 + 1 } else { n };
            for r in 1..=rmax {
                let rep = sampled_local_dimension(notion, n, r, 10, 42).unwrap();
                if rep.sampled_value != rep.formula_value {
                    bad.push(format!(
                        "{notion:?} n={n} r={r}: sampled {} formula {}",
                        rep.sampled_value, rep.formula_value
                    ));
                }
                cases += 1;
            }
        }
    }
    if start.elapsed() > Duration::from_secs(120) {
        bad.push(format!("took {:?}", start.elapsed()));
    }
    outcome(bad, format!("{cases} (notion, n, r) cases equal the formula"))
}

fn infinite_rank_detection() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..100 {
        let n = rng.gen_range(2..=6);
        let s = random_finite_symmetric(&mut rng, n, -9, 9);
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        // Push M_ij just below the average of the two diagonal entries.
        let below = (s.get(i, i) + s.get(j, j)).half() - Scalar::int(rng.gen_range(1..=5));
        let s = s.with_entry(i, j, below);
        let r = rank(&s.clone().into(), Notion::Symmetric, &RankOptions::default()).unwrap();
        let pair = match r.lower_certificate {
            Some(tropical_rank::rank::LowerCertificate::InfinitePair { i, j }) => Some((i - 1, j - 1)),
            _ => None,
        };
        let pinpointed = pair.is_some_and(|(a, b)| s.get(a, a) + s.get(b, b) > s.get(a, b).times(2));
        if r.value != Some(RankValue::Infinite) || !pinpointed {
            bad.push(format!("violating #{k}: {:?} {pair:?}", r.value));
        }
    }
    for k in 0..100 {
        let n = rng.gen_range(2..=6);
        let s: Matrix = random_finite_symmetric(&mut rng, n, -9, 9).into();
        let r = rank(&s, Notion::Symmetric, &RankOptions::default()).unwrap();
        let verified = r.upper_certificate.as_ref().is_some_and(|d| common::check(&s, d).is_ok());
        if !matches!(r.value, Some(RankValue::Finite(_))) || !verified {
            bad.push(format!("finite #{k}: {:?}", r.value));
        }
    }
    outcome(bad, "100 infinite with a violating pair, 100 finite with verified decompositions".into())
}

fn degrees(edges: &[((usize, usize), (usize, usize))]) -> Vec<usize> {
    let mut verts: Vec<(usize, usize)> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort();
    verts.dedup();
    verts
        .iter()
        .map(|v| edges.iter().filter(|&&(a, b)| a == *v || b == *v).count())
        .collect()
}

fn deficiency_classification() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut counts = std::collections::BTreeMap::new();
    for k in 0..1000 {
        let m: DissimilarityMatrix = match random_with(&mut rng, Kind::Dissimilarity, 5, 0, 9) {
            Matrix::Dissimilarity(d) => d,
            _ => unreachable!(),
        };
        let cls = match classify_petersen(&m) {
            Ok(c) => c,
            Err(e) => {
                bad.push(format!("#{k}: {e}"));
                continue;
            }
        };
        *counts.entry(format!("{:?}", cls.class)).or_insert(0) += 1;
        if let Some(cycle) = has_alternating_even_cycle(&cls.edges) {
            bad.push(format!("#{k}: alternating cycle {cycle:?}"));
        }
        if cls.edges.len() == 5 && cls.class != PetersenClass::FiveCycle {
            let deg = degrees(&cls.edges);
            if deg.iter().all(|&d| d <= 2) {
                bad.push(format!("#{k}: five edges with maximum degree <= 2"));
            }
        }
        let rank = tree5_rank(&m).unwrap().value;
        let want = match cls.class {
            PetersenClass::Trivial => 1,
            PetersenClass::FiveCycle => 3,
            _ => 2,
        };
        if rank != RankValue::Finite(want) {
            bad.push(format!("#{k}: {:?} with tree rank {rank:?}", cls.class));
        }
    }
    outcome(bad, format!("1000 instances classified: {counts:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("regression table of known values", regression_table),
        ("closed forms agree with exact search", oracle_equivalence),
        ("rank chain sym >= star >= tree", chain_inequality),
        ("constructive decompositions verify within bounds", construction_soundness),
        ("deficiency chromatic number is a lower bound", lower_bound_soundness),
        ("sampled dimension equals the formula", dimension_verification),
        ("infinite symmetric rank detection", infinite_rank_detection),
        ("five-point deficiency graph taxonomy", deficiency_classification),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {} {} {name}: {} [{:.2}s]",
            k + 1,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
