//! Largest known tree ranks by matrix size, shipped as a data file.

use serde::{Deserialize, Serialize};

const DATA: &str = include_str!("../data/max_tree_rank.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    /// A size such as `"7"` or a family such as `"9k"`.
    pub n: String,
    pub lower: String,
    pub upper: String,
    /// `"determined"` or `"undetermined"`.
    pub status: String,
    pub upper_from: String,
    pub witness: String,
}

#[derive(Deserialize)]
struct File {
    rows: Vec<TableRow>,
}

pub fn rows() -> Vec<TableRow> {
    serde_json::from_str::<File>(DATA).expect("bundled table parses").rows
}

/// Known `(lower, upper)` bounds on the largest tree rank of an `n x n`
/// matrix. The lower bound is `None` when no witness is recorded.
pub fn max_tree_rank_bounds(n: usize) -> (Option<usize>, usize) {
    if n < 3 {
        return (Some(1), 1);
    }
    for row in rows() {
        if row.n.parse() == Ok(n) {
            return (row.lower.parse().ok(), row.upper.parse().expect("numeric upper"));
        }
    }
    let upper = if n >= 6 { n - 3 } else { n - 2 };
    let lower = (n % 9 == 0).then_some(6 * (n / 9));
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_load() {
        let r = rows();
        assert_eq!(r.len(), 9);
        assert_eq!(r[7].status, "undetermined");
        assert_eq!(max_tree_rank_bounds(10), (Some(6), 7));
        assert_eq!(max_tree_rank_bounds(18), (Some(12), 15));
        assert_eq!(max_tree_rank_bounds(5), (Some(3), 3));
    }
}
