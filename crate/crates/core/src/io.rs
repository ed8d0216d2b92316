//! Plain-text matrix files.
//!
//! ```text
//! # optional comments
//! dissimilarity 3
//! *   1   2
//! 1   *   1/2
//! 2   1/2 *
//! ```
//!
//! The header names the kind (`symmetric` or `dissimilarity`) and the size;
//! `n` rows of `n` entries follow. Entries are integers, `p/q` or
//! terminating decimals. Diagonal cells of a dissimilarity matrix are `*`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{DissimilarityMatrix, Matrix, SymmetricMatrix};
use crate::scalar::Scalar;

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut head = header.split_whitespace();
    let kind = head.next().unwrap_or_default();
    let symmetric = match kind {
        "symmetric" => true,
        "dissimilarity" => false,
        other => {
            return Err(Error::Parse(format!(
                "line {hline}: expected `symmetric` or `dissimilarity`, found {other:?}"
            )))
        }
    };
    let n: usize = head
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse(format!("line {hline}: header needs a positive size")))?;
    if let Some(extra) = head.next() {
        return Err(Error::Parse(format!("line {hline}: unexpected {extra:?} in header")));
    }

    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for (ln, line) in lines {
        let i = rows.len();
        if i == n {
            return Err(Error::Parse(format!("line {ln}: more than {n} rows")));
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != n {
            return Err(Error::Parse(format!(
                "line {ln}: expected {n} entries, found {}",
                cells.len()
            )));
        }
        let mut row = Vec::with_capacity(n);
        for (j, cell) in cells.into_iter().enumerate() {
            if !symmetric && i == j {
                if cell != "*" {
                    return Err(Error::Parse(format!("line {ln}: diagonal cell must be `*`")));
                }
                row.push(Scalar::int(0));
                continue;
            }
            if cell == "*" {
                return Err(Error::Parse(format!("line {ln}: `*` is only allowed on the diagonal")));
            }
            row.push(
                cell.parse()
                    .map_err(|e: Error| Error::Parse(format!("line {ln}: {e}")))?,
            );
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
    }
    let m = if symmetric {
        Matrix::Symmetric(SymmetricMatrix::from_rows(&rows)?)
    } else {
        Matrix::Dissimilarity(DissimilarityMatrix::from_rows(&rows)?)
    };
    Ok(m)
}

pub fn format_matrix(m: &Matrix) -> String {
    let n = m.n();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m {
                    Matrix::Symmetric(s) => s.get(i, j).to_string(),
                    Matrix::Dissimilarity(_) if i == j => "*".to_string(),
                    Matrix::Dissimilarity(d) => d.get(i, j).to_string(),
                })
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = format!("{} {n}\n", m.kind_name());
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# a comment\ndissimilarity 3\n*   1   2\n1   *   1/2\n2   1/2 *\n";
        let m = parse_matrix(text).unwrap();
        let again = parse_matrix(&format_matrix(&m)).unwrap();
        assert_eq!(m, again);
        assert_eq!(format_matrix(&again), format_matrix(&m));
    }

    #[test]
    fn symmetric_file() {
        let m = parse_matrix("symmetric 2\n0 -1\n-1 3 # trailing\n").unwrap();
        assert_eq!(m.kind_name(), "symmetric");
        assert!(format_matrix(&m).starts_with("symmetric 2\n"));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("dissimilarity 2\n0 1\n1 *\n").is_err());
        assert!(parse_matrix("symmetric 2\n0 1\n2 0\n").is_err());
        assert!(parse_matrix("symmetric 2\n0 1\n").is_err());
        assert!(parse_matrix("matrix 2\n0 1\n1 0\n").is_err());
    }
}
