//! Ranks with respect to the three rank-one varieties: certificates,
//! verification, and the driver choosing between closed forms, covers,
//! exact search and bounds.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    rank_one_symmetric, star_tree_matrix, trop_sum, DissimilarityMatrix, Matrix, RowVector,
    SymmetricMatrix,
};
use crate::membership::{is_rank1_symmetric, is_star_tree, is_tree_matrix};
use crate::polynomial::Entries;
use crate::tree::{realize_tree, WeightedTree};

pub mod construct;
pub mod exact;
pub mod fm;
pub mod oracle;

/// A rank or chromatic number: a positive integer or infinity. Serialized
/// as a JSON number or the string `"infinity"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankValue {
    Finite(usize),
    Infinite,
}

impl RankValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            RankValue::Finite(r) => Some(*r),
            RankValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RankValue::Infinite)
    }
}

impl Serialize for RankValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankValue::Finite(r) => s.serialize_u64(*r as u64),
            RankValue::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for RankValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|r| RankValue::Finite(r as usize))
                .ok_or_else(|| serde::de::Error::custom("rank must be a positive integer")),
            serde_json::Value::String(s) if s == "infinity" => Ok(RankValue::Infinite),
            other => Err(serde::de::Error::custom(format!("not a rank: {other}"))),
        }
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Finite(r) => write!(f, "{r}"),
            RankValue::Infinite => write!(f, "infinity"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    /// Symmetric Barvinok rank: summands `v^T ⊙ v`.
    Symmetric,
    /// Star tree rank: summands `π(v^T ⊙ v)`.
    Star,
    /// Tree rank: summands are tree matrices.
    Tree,
}

impl Notion {
    pub fn from_name(s: &str) -> Result<Notion> {
        match s {
            "sym" | "symmetric" => Ok(Notion::Symmetric),
            "star" | "star-tree" => Ok(Notion::Star),
            "tree" => Ok(Notion::Tree),
            other => Err(Error::UnknownName(format!("notion {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Notion::Symmetric => "sym",
            Notion::Star => "star",
            Notion::Tree => "tree",
        }
    }

    pub fn basis(&self) -> crate::polynomial::Basis {
        use crate::polynomial::Basis;
        match self {
            Notion::Symmetric => Basis::SymmetricMinors,
            Notion::Star => Basis::StarTree,
            Notion::Tree => Basis::Pluecker,
        }
    }

    /// Membership of a single matrix in the rank-one variety.
    pub fn contains(&self, m: &Matrix) -> bool {
        match (self, m) {
            (Notion::Symmetric, Matrix::Symmetric(s)) => is_rank1_symmetric(s),
            (Notion::Star, Matrix::Dissimilarity(d)) => is_star_tree(d),
            (Notion::Tree, Matrix::Dissimilarity(d)) => is_tree_matrix(d),
            _ => false,
        }
    }

    pub fn check_kind(&self, m: &Matrix) -> Result<()> {
        let ok = matches!(
            (self, m),
            (Notion::Symmetric, Matrix::Symmetric(_))
                | (Notion::Star | Notion::Tree, Matrix::Dissimilarity(_))
        );
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{} rank is not defined for a {} matrix",
                self.name(),
                m.kind_name()
            )))
        }
    }
}

/// How a summand arises: a rank-one generator vector or a weighted tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "type", content = "value")]
pub enum Generator {
    Vector(RowVector),
    Tree(WeightedTree),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub matrix: Matrix,
    pub generator: Option<Generator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub notion: Notion,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn symmetric(vectors: Vec<RowVector>) -> Decomposition {
        Decomposition {
            notion: Notion::Symmetric,
            summands: vectors
                .into_iter()
                .map(|v| Summand {
                    matrix: Matrix::Symmetric(rank_one_symmetric(&v)),
                    generator: Some(Generator::Vector(v)),
                })
                .collect(),
        }
    }

    pub fn star(vectors: Vec<RowVector>) -> Decomposition {
        Decomposition {
            notion: Notion::Star,
            summands: vectors
                .into_iter()
                .map(|v| Summand {
                    matrix: Matrix::Dissimilarity(star_tree_matrix(&v)),
                    generator: Some(Generator::Vector(v)),
                })
                .collect(),
        }
    }

    /// Tree summands; each is realized as a weighted tree when possible.
    pub fn tree(matrices: Vec<DissimilarityMatrix>) -> Decomposition {
        Decomposition {
            notion: Notion::Tree,
            summands: matrices
                .into_iter()
                .map(|m| Summand {
                    generator: realize_tree(&m).ok().map(Generator::Tree),
                    matrix: Matrix::Dissimilarity(m),
                })
                .collect(),
        }
    }

    /// Reinterpret a star tree decomposition as a tree decomposition.
    pub fn star_as_tree(self) -> Decomposition {
        let mats = self
            .summands
            .into_iter()
            .map(|s| match s.matrix {
                Matrix::Dissimilarity(d) => d,
                Matrix::Symmetric(_) => unreachable!("star summands are dissimilarity matrices"),
            })
            .collect();
        Decomposition::tree(mats)
    }

    pub fn total(&self) -> Option<Matrix> {
        let mut it = self.summands.iter();
        let first = it.next()?.matrix.clone();
        it.try_fold(first, |acc, s| trop_sum(&acc, &s.matrix)).ok()
    }

    pub fn symmetric_matrices(&self) -> Vec<SymmetricMatrix> {
        self.summands
            .iter()
            .filter_map(|s| match &s.matrix {
                Matrix::Symmetric(m) => Some(m.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn dissimilarity_matrices(&self) -> Vec<DissimilarityMatrix> {
        self.summands
            .iter()
            .filter_map(|s| match &s.matrix {
                Matrix::Dissimilarity(m) => Some(m.clone()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub failure: Option<String>,
}

/// Check every summand against its variety (and its generator, if any) and
/// the tropical sum against `m`, exactly.
pub fn verify(m: &Matrix, d: &Decomposition) -> VerifyReport {
    let fail = |msg: String| VerifyReport {
        ok: false,
        failure: Some(msg),
    };
    if let Err(e) = d.notion.check_kind(m) {
        return fail(e.to_string());
    }
    if d.summands.is_empty() {
        return fail("empty decomposition".into());
    }
    for (k, s) in d.summands.iter().enumerate() {
        if s.matrix.n() != m.n() || s.matrix.kind_name() != m.kind_name() {
            return fail(format!("summand {} has the wrong shape", k + 1));
        }
        if !d.notion.contains(&s.matrix) {
            return fail(format!(
                "summand {} is not in the {} variety",
                k + 1,
                d.notion.name()
            ));
        }
        let consistent = match (&s.generator, &s.matrix) {
            (None, _) => true,
            (Some(Generator::Vector(v)), Matrix::Symmetric(x)) => rank_one_symmetric(v) == *x,
            (Some(Generator::Vector(v)), Matrix::Dissimilarity(x)) => star_tree_matrix(v) == *x,
            (Some(Generator::Tree(t)), Matrix::Dissimilarity(x)) => {
                t.check().is_ok() && t.leaf_distances() == *x
            }
            (Some(Generator::Tree(_)), Matrix::Symmetric(_)) => false,
        };
        if !consistent {
            return fail(format!("summand {} does not match its generator", k + 1));
        }
    }
    let total = d.total().expect("shapes checked");
    let pairs = match m {
        Matrix::Symmetric(s) => s.pairs(),
        Matrix::Dissimilarity(s) => s.pairs(),
    };
    for p in pairs {
        let (want, got) = (m.entry(p), total.entry(p));
        if want != got {
            return fail(format!(
                "entry ({}, {}): matrix has {want}, sum has {got}",
                p.0 + 1,
                p.1 + 1
            ));
        }
    }
    VerifyReport {
        ok: true,
        failure: None,
    }
}

pub use exact::{ExactOptions, ExactResult, LowerCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed forms and covers when they apply, then exact search within
    /// scale, then bounds.
    Auto,
    Exact,
    /// Deficiency lower bound and constructive upper bound only.
    Bounds,
}

impl Method {
    pub fn from_name(s: &str) -> Result<Method> {
        match s {
            "auto" => Ok(Method::Auto),
            "exact" => Ok(Method::Exact),
            "bounds" => Ok(Method::Bounds),
            other => Err(Error::UnknownName(format!("method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankOptions {
    pub method: Method,
    /// Largest rank the exact search tries.
    pub budget: usize,
    /// Cut-off for the exact search and for exact coloring.
    pub time_limit: Option<Duration>,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            method: Method::Auto,
            budget: 64,
            time_limit: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankResult {
    pub notion: Notion,
    /// `None` when only the interval `[lower, upper]` is known.
    #[serde(rename = "rank")]
    pub value: Option<RankValue>,
    /// `usize::MAX` for infinite rank.
    #[serde(serialize_with = "serialize_bound")]
    pub lower: usize,
    pub upper: Option<usize>,
    pub lower_certificate: Option<LowerCertificate>,
    pub upper_certificate: Option<Decomposition>,
    pub deficiency_chromatic: Option<usize>,
    /// Which procedure settled the value.
    pub method: String,
    pub note: Option<String>,
}

impl RankResult {
    fn determined(notion: Notion, r: usize, lower: LowerCertificate, d: Decomposition, how: &str) -> RankResult {
        RankResult {
            notion,
            value: Some(RankValue::Finite(r)),
            lower: r,
            upper: Some(r),
            lower_certificate: Some(lower),
            upper_certificate: Some(d),
            deficiency_chromatic: None,
            method: how.into(),
            note: None,
        }
    }

    pub fn is_determined(&self) -> bool {
        self.value.is_some()
    }
}

fn serialize_bound<S: serde::Serializer>(b: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    if *b == usize::MAX {
        RankValue::Infinite.serialize(s)
    } else {
        RankValue::Finite(*b).serialize(s)
    }
}

/// Largest instance the exact search is attempted on by `auto`.
pub fn within_exact_scale(notion: Notion, n: usize) -> bool {
    match notion {
        Notion::Tree => n <= 6,
        Notion::Star => n <= 7,
        Notion::Symmetric => n <= 6,
    }
}

pub fn rank(m: &Matrix, notion: Notion, opts: &RankOptions) -> Result<RankResult> {
    notion.check_kind(m)?;
    if let Matrix::Symmetric(s) = m {
        if let Some((i, j)) = construct::infinite_witness(s) {
            return Ok(RankResult {
                notion,
                value: Some(RankValue::Infinite),
                lower: usize::MAX,
                upper: None,
                lower_certificate: Some(LowerCertificate::InfinitePair { i: i + 1, j: j + 1 }),
                upper_certificate: None,
                deficiency_chromatic: None,
                method: "finiteness".into(),
                note: None,
            });
        }
    }
    if let Some(d) = single_summand(m, notion) {
        return Ok(RankResult::determined(notion, 1, LowerCertificate::Trivial, d, "membership"));
    }
    if opts.method == Method::Auto {
        if let Some(r) = closed_form(m, notion)? {
            return Ok(r);
        }
    }
    let upper = construct::upper_decomposition(m, notion)?;
    let u = upper.len();
    let n = m.n();
    let exact_ok = match opts.method {
        Method::Exact => true,
        Method::Auto => within_exact_scale(notion, n),
        Method::Bounds => false,
    };
    if exact_ok {
        let eo = ExactOptions {
            budget: opts.budget.min(u - 1),
            time_limit: opts.time_limit,
        };
        let res = exact::exact_rank(m, notion, &eo)?;
        let mut out = RankResult {
            notion,
            value: None,
            lower: res.lower,
            upper: Some(u),
            lower_certificate: res.lower_certificate.clone(),
            upper_certificate: Some(upper),
            deficiency_chromatic: res.deficiency_chromatic,
            method: "exact".into(),
            note: None,
        };
        if let (Some(v), Some(d)) = (res.value, res.decomposition) {
            out.value = Some(v);
            out.upper = v.finite();
            out.upper_certificate = Some(d);
            out.note = unsolid_note(m, notion, v)?;
        } else if res.lower >= u {
            // Nothing smaller than the construction exists.
            out.value = Some(RankValue::Finite(u));
            out.lower = u;
            out.lower_certificate = Some(match res.deficiency_chromatic {
                Some(c) if c == u => LowerCertificate::Coloring { chromatic_number: c },
                c => LowerCertificate::Exhaustion {
                    below: u,
                    chromatic_number: c,
                    conflict_bound: res.lower.min(u),
                },
            });
        } else {
            out.method = "exact (interrupted)".into();
        }
        return Ok(out);
    }
    let h = crate::deficiency::build_deficiency(m, notion.basis())?;
    let c = crate::deficiency::chromatic_number_limited(&h, opts.time_limit);
    let chi = c.value.finite().unwrap_or(1);
    let mut out = RankResult {
        notion,
        value: None,
        lower: chi,
        upper: Some(u),
        lower_certificate: Some(LowerCertificate::Coloring { chromatic_number: chi }),
        upper_certificate: Some(upper),
        deficiency_chromatic: c.exact.then_some(chi),
        method: "bounds".into(),
        note: (!c.exact).then(|| "coloring cut off; lower bound is a clique bound".to_string()),
    };
    if chi >= u {
        out.value = Some(RankValue::Finite(u));
        out.lower = u;
    }
    Ok(out)
}

fn single_summand(m: &Matrix, notion: Notion) -> Option<Decomposition> {
    if !notion.contains(m) {
        return None;
    }
    Some(match m {
        Matrix::Symmetric(s) => Decomposition::symmetric(vec![crate::matrix::rank_one_generator(s)?]),
        Matrix::Dissimilarity(d) => match notion {
            Notion::Star => Decomposition::star(vec![crate::matrix::star_generator(d)?]),
            _ => Decomposition::tree(vec![d.clone()]),
        },
    })
}

/// A 0/1 matrix whose minimum clique/star cover is not solid but whose
/// star tree rank still equals the cover size: the solid condition was not
/// needed there.
fn unsolid_note(m: &Matrix, notion: Notion, value: RankValue) -> Result<Option<String>> {
    let Matrix::Dissimilarity(d) = m else {
        return Ok(None);
    };
    if notion != Notion::Star || !d.is_zero_one() || d.n() > crate::covers::MAX_COVER_VERTICES {
        return Ok(None);
    }
    let zr = crate::covers::star_tree_rank_01(d)?;
    Ok((zr.solid == Some(false) && value == RankValue::Finite(zr.lower)).then(|| {
        format!(
            "no minimum clique/star cover is solid, yet the rank equals the cover size {}",
            zr.lower
        )
    }))
}

fn closed_form(m: &Matrix, notion: Notion) -> Result<Option<RankResult>> {
    use crate::small_cases;
    let closed = |r: RankValue, d: Decomposition, name: &str| -> Option<RankResult> {
        let r = r.finite()?;
        Some(RankResult::determined(
            notion,
            r,
            LowerCertificate::ClosedForm {
                classifier: name.into(),
            },
            d,
            name,
        ))
    };
    match (notion, m) {
        (Notion::Symmetric, Matrix::Symmetric(s)) if s.n() == 3 => {
            let r = small_cases::sym3_rank(s)?;
            return Ok(r.decomposition.and_then(|d| closed(r.value, d, "sym3")));
        }
        (Notion::Star, Matrix::Dissimilarity(d)) if d.n() == 5 => {
            let r = small_cases::star5_rank(d)?;
            return Ok(closed(r.value, r.decomposition, "star5"));
        }
        (Notion::Tree, Matrix::Dissimilarity(d)) if d.n() == 5 => {
            let r = small_cases::tree5_rank(d)?;
            return Ok(closed(r.value, r.decomposition, "tree5"));
        }
        _ => {}
    }
    let zero_one = match m {
        Matrix::Symmetric(s) => s.is_zero_one(),
        Matrix::Dissimilarity(d) => d.is_zero_one(),
    };
    if !zero_one || m.n() > crate::covers::MAX_COVER_VERTICES {
        return Ok(None);
    }
    let zr = match (notion, m) {
        (Notion::Symmetric, Matrix::Symmetric(s)) => crate::covers::symmetric_rank_01(s)?,
        (Notion::Star, Matrix::Dissimilarity(d)) => crate::covers::star_tree_rank_01(d)?,
        (Notion::Tree, Matrix::Dissimilarity(d)) => crate::covers::tree_rank_01(d)?,
        _ => unreachable!("kind checked"),
    };
    let Some(r) = zr.value.finite() else {
        return Ok(None);
    };
    if zr.lower != r {
        // Non-solid minimum star cover: left to the exact search.
        return Ok(None);
    }
    let d = zr.decomposition.expect("finite cover rank has a decomposition");
    Ok(Some(RankResult::determined(
        notion,
        r,
        LowerCertificate::Cover { size: r },
        d,
        "cover",
    )))
}
