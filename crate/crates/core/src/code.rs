//! Linear codes given by a full-rank generator matrix, and their text formats.
//!
//! Matrix file: a header `<field descriptor> <n> <k>` (for example
//! `2^1/01 63 14`), then `k` lines of `n` space-separated element digit strings.
//! Label sidecar: one `<column index>\t<label>` line per column.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::gf::{Fe, Field, GfError};
use crate::linalg::{Echelon, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("generator rows are linearly dependent (rank {rank} of {rows})")]
    DependentRows { rows: usize, rank: usize },
    #[error("{labels} column labels for {n} columns")]
    LabelCount { labels: usize, n: usize },
    #[error("duplicate column label {0:?}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    gen: Matrix,
    column_labels: Vec<String>,
    pub provenance: BTreeMap<String, String>,
}

impl LinearCode {
    /// Wraps a generator matrix; rows must be independent and labels distinct.
    /// Empty `labels` get the default `c<index>` labels.
    pub fn new(
        gen: Matrix,
        labels: Vec<String>,
        provenance: BTreeMap<String, String>,
    ) -> Result<LinearCode, FormatError> {
        let rank = gen.rank();
        if rank != gen.rows() {
            return Err(FormatError::DependentRows { rows: gen.rows(), rank });
        }
        let labels = if labels.is_empty() {
            (0..gen.cols()).map(|i| format!("c{i}")).collect()
        } else {
            labels
        };
        if labels.len() != gen.cols() {
            return Err(FormatError::LabelCount { labels: labels.len(), n: gen.cols() });
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(FormatError::DuplicateLabel(l.clone()));
            }
        }
        Ok(LinearCode { gen, column_labels: labels, provenance })
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn column_labels(&self) -> &[String] {
        &self.column_labels
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        self.gen.left_mul(msg)
    }

    pub fn matrix_to_text(&self) -> String {
        let field = self.field();
        let mut s = format!("{} {} {}\n", field.descriptor(), self.n(), self.k());
        for row in self.gen.row_iter() {
            let cells: Vec<String> = row.iter().map(|&x| field.to_digits(x)).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn labels_to_text(&self) -> String {
        self.column_labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{i}\t{l}\n"))
            .collect()
    }

    /// Parses a matrix file, reporting the first offending line.
    pub fn parse_matrix(text: &str) -> Result<LinearCode, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: String| FormatError::Parse { line, msg };
        let (hline, header) = lines.next().ok_or_else(|| err(1, "empty matrix file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(hline, format!("expected `<field> <n> <k>`, found {header:?}")));
        }
        let field = Field::from_descriptor(parts[0]).map_err(|e| err(hline, e.to_string()))?;
        let n: usize = parts[1].parse().map_err(|_| err(hline, format!("bad length {:?}", parts[1])))?;
        let k: usize = parts[2].parse().map_err(|_| err(hline, format!("bad dimension {:?}", parts[2])))?;
        let mut rows = Vec::with_capacity(k);
        let mut last_line = hline;
        for (lineno, line) in lines {
            last_line = lineno;
            if rows.len() == k {
                return Err(err(lineno, format!("unexpected extra row (header declares {k})")));
            }
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != n {
                return Err(err(lineno, format!("expected {n} entries, found {}", cells.len())));
            }
            let row = cells
                .iter()
                .map(|c| field.parse_digits(c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(lineno, e.to_string()))?;
            rows.push(row);
        }
        if rows.len() != k {
            return Err(err(
                last_line + 1,
                format!("file ends after {} of {k} rows", rows.len()),
            ));
        }
        LinearCode::new(Matrix::from_rows(&field, n, rows), Vec::new(), BTreeMap::new())
    }

    /// Replaces labels with those from a sidecar file.
    pub fn with_labels_text(self, text: &str) -> Result<LinearCode, FormatError> {
        let mut labels = vec![None; self.n()];
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let (idx, label) = raw
                .split_once('\t')
                .ok_or_else(|| FormatError::Parse { line: i + 1, msg: "expected `index<TAB>label`".into() })?;
            let idx: usize = idx.trim().parse().map_err(|_| FormatError::Parse {
                line: i + 1,
                msg: format!("bad column index {idx:?}"),
            })?;
            let slot = labels.get_mut(idx).ok_or_else(|| FormatError::Parse {
                line: i + 1,
                msg: format!("column {idx} out of range"),
            })?;
            *slot = Some(label.to_string());
        }
        let labels: Option<Vec<String>> = labels.into_iter().collect();
        let labels = labels.ok_or(FormatError::LabelCount { labels: 0, n: self.n() })?;
        LinearCode::new(self.gen, labels, self.provenance)
    }
}

/// Picks the rows of `rows` that extend the span, in order; returns them with the rank.
pub(crate) fn independent_rows(field: &Field, cols: usize, rows: Vec<Vec<Fe>>) -> (Vec<Vec<Fe>>, usize) {
    let total = rows.len();
    let mut ech = Echelon::new(field, cols);
    let mut kept = Vec::new();
    for row in rows {
        if ech.insert(row.clone()) {
            kept.push(row);
        }
    }
    debug_assert!(kept.len() <= total);
    let rank = kept.len();
    (kept, rank)
}
