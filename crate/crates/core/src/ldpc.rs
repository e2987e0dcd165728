//! Sparse parity-check matrices and their Tanner graphs.
//!
//! Matrices are stored as per-row and per-column adjacency lists. Files and
//! human-facing reports use the customary 1-based indices of the alist
//! interchange format; everything in memory is 0-based.

use crate::graph::BipartiteGraph;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) out of range for a {n_rows}x{n_cols} matrix")]
    EntryOutOfRange { row: usize, col: usize, n_rows: usize, n_cols: usize },
    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("column index {col} out of range (matrix has {n_cols} columns)")]
    ColumnOutOfRange { col: usize, n_cols: usize },
    #[error("column pair requires two distinct columns, got {col} twice")]
    IdenticalColumns { col: usize },
}

/// Errors raised while reading an alist file. Every variant carries the
/// 1-based line number it was detected on.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlistError {
    #[error("line {line}: malformed header, expected `n m` with n, m >= 1")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected an integer, found `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    WrongCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: index {index} out of range (valid range 1..={max})")]
    IndexOutOfRange { line: usize, index: usize, max: usize },
    #[error("line {line}: index {index} listed twice")]
    DuplicateIndex { line: usize, index: usize },
    #[error("line {line}: degree list declares {declared} entries but adjacency has {found}")]
    DegreeMismatch { line: usize, declared: usize, found: usize },
    #[error("line {line}: row adjacency disagrees with the column lists")]
    Inconsistent { line: usize },
    #[error("line {line}: file ended early")]
    UnexpectedEof { line: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// A finding from [`ParityCheckMatrix::validate`]. Indices in the rendered
/// message are 1-based; the fields are 0-based like the rest of the API.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    ZeroRow { row: usize },
    ZeroColumn { col: usize },
    DuplicateEntry { row: usize, col: usize },
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        match self {
            Diagnostic::ZeroRow { .. } | Diagnostic::ZeroColumn { .. } => Severity::Warning,
            Diagnostic::DuplicateEntry { .. } => Severity::Error,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ZeroRow { row } => write!(f, "warning: row {} has no entries", row + 1),
            Diagnostic::ZeroColumn { col } => {
                write!(f, "warning: column {} has no entries", col + 1)
            }
            Diagnostic::DuplicateEntry { row, col } => {
                write!(f, "error: duplicate entry at row {}, column {}", row + 1, col + 1)
            }
        }
    }
}

/// A sparse binary parity-check matrix.
///
/// `n_cols` columns correspond to variable nodes, `n_rows` rows to check
/// nodes. The per-row and per-column lists are kept sorted and mutually
/// consistent by the checked constructors; [`from_entries_unchecked`]
/// deliberately skips the duplicate check so [`validate`] has something to
/// report in tests and ingestion pipelines.
///
/// [`from_entries_unchecked`]: ParityCheckMatrix::from_entries_unchecked
/// [`validate`]: ParityCheckMatrix::validate
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n_rows: usize,
    n_cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
    n_entries: usize,
}

impl ParityCheckMatrix {
    /// Builds a matrix from (row, col) positions of the 1-entries.
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize)],
    ) -> Result<Self, MatrixError> {
        let m = Self::build(n_rows, n_cols, entries)?;
        for row in 0..n_rows {
            let adj = &m.row_adj[row];
            for w in adj.windows(2) {
                if w[0] == w[1] {
                    return Err(MatrixError::DuplicateEntry { row, col: w[0] });
                }
            }
        }
        Ok(m)
    }

    /// Like [`from_entries`](Self::from_entries) but keeps duplicate entries,
    /// leaving them for [`validate`](Self::validate) to report.
    pub fn from_entries_unchecked(
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize)],
    ) -> Result<Self, MatrixError> {
        Self::build(n_rows, n_cols, entries)
    }

    fn build(
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize)],
    ) -> Result<Self, MatrixError> {
        let mut row_adj = vec![Vec::new(); n_rows];
        let mut col_adj = vec![Vec::new(); n_cols];
        for &(r, c) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(MatrixError::EntryOutOfRange { row: r, col: c, n_rows, n_cols });
            }
            row_adj[r].push(c);
            col_adj[c].push(r);
        }
        for adj in &mut row_adj {
            adj.sort_unstable();
        }
        for adj in &mut col_adj {
            adj.sort_unstable();
        }
        Ok(ParityCheckMatrix { n_rows, n_cols, row_adj, col_adj, n_entries: entries.len() })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn entry_count(&self) -> usize {
        self.n_entries
    }

    /// Sorted column indices of the 1-entries in row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_adj[r]
    }

    /// Sorted row indices of the 1-entries in column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_adj[c]
    }

    pub fn has_entry(&self, r: usize, c: usize) -> bool {
        self.row_adj[r].binary_search(&c).is_ok()
    }

    /// All (row, col) entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_adj
            .iter()
            .enumerate()
            .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c)))
    }

    /// Reports zero rows, zero columns and duplicate entries without
    /// mutating anything. Zero rows and columns are warnings: they show up in
    /// constructed counter-examples and must not abort an analysis.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (r, adj) in self.row_adj.iter().enumerate() {
            if adj.is_empty() {
                out.push(Diagnostic::ZeroRow { row: r });
            }
            for w in adj.windows(2) {
                if w[0] == w[1] {
                    out.push(Diagnostic::DuplicateEntry { row: r, col: w[0] });
                }
            }
        }
        for (c, adj) in self.col_adj.iter().enumerate() {
            if adj.is_empty() {
                out.push(Diagnostic::ZeroColumn { col: c });
            }
        }
        out
    }

    /// The Tanner graph: one left node per column (variable node), one right
    /// node per row (check node), one edge per 1-entry.
    pub fn to_tanner_graph(&self) -> BipartiteGraph {
        let edges: Vec<(usize, usize)> = self.entries().map(|(r, c)| (c, r)).collect();
        BipartiteGraph::new(self.n_cols, self.n_rows, edges)
            .expect("validated matrix entries form a simple bipartite graph")
    }

    /// Parses the alist interchange format.
    ///
    /// Layout: `n m` header, the two maximum degrees, the n column degrees,
    /// the m row degrees, then one adjacency line per column and per row with
    /// 1-based indices. Zero entries are accepted as padding. The row lists
    /// are checked against the column lists.
    pub fn parse_alist(text: &str) -> Result<Self, AlistError> {
        let mut lines = NumberedLines::new(text);

        let header = lines.next_tokens()?;
        if header.tokens.len() != 2 {
            return Err(AlistError::MalformedHeader { line: header.line });
        }
        let n_cols = parse_int(&header.tokens[0], header.line)?;
        let n_rows = parse_int(&header.tokens[1], header.line)?;
        if n_cols == 0 || n_rows == 0 {
            return Err(AlistError::MalformedHeader { line: header.line });
        }

        let maxima = lines.next_tokens()?;
        if maxima.tokens.len() != 2 {
            return Err(AlistError::WrongCount {
                line: maxima.line,
                expected: 2,
                found: maxima.tokens.len(),
            });
        }
        for t in &maxima.tokens {
            parse_int(t, maxima.line)?;
        }

        let col_degrees = lines.degree_list(n_cols)?;
        let row_degrees = lines.degree_list(n_rows)?;

        let mut entries = Vec::new();
        for (c, &deg) in col_degrees.iter().enumerate() {
            let rows = lines.adjacency_line(deg, n_rows)?;
            for r in rows {
                entries.push((r, c));
            }
        }

        let matrix = ParityCheckMatrix::from_entries_unchecked(n_rows, n_cols, &entries)
            .expect("indices already range-checked");

        // The row half of the file must describe the same entry set.
        for (r, &deg) in row_degrees.iter().enumerate() {
            let line = lines.peek_line_number();
            let cols = lines.adjacency_line(deg, n_cols)?;
            let mut expected = matrix.row(r).to_vec();
            let mut found = cols;
            expected.sort_unstable();
            found.sort_unstable();
            if expected != found {
                return Err(AlistError::Inconsistent { line });
            }
        }

        Ok(matrix)
    }

    /// Serializes to alist text. Degree-0 nodes produce an empty adjacency
    /// line, and no zero padding is emitted.
    pub fn to_alist(&self) -> String {
        let mut out = String::new();
        let cmax = self.col_adj.iter().map(Vec::len).max().unwrap_or(0);
        let rmax = self.row_adj.iter().map(Vec::len).max().unwrap_or(0);
        out.push_str(&format!("{} {}\n", self.n_cols, self.n_rows));
        out.push_str(&format!("{} {}\n", cmax, rmax));
        push_counts(&mut out, self.col_adj.iter().map(Vec::len));
        push_counts(&mut out, self.row_adj.iter().map(Vec::len));
        for adj in &self.col_adj {
            push_counts(&mut out, adj.iter().map(|&r| r + 1));
        }
        for adj in &self.row_adj {
            push_counts(&mut out, adj.iter().map(|&c| c + 1));
        }
        out
    }
}

fn push_counts(out: &mut String, values: impl Iterator<Item = usize>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        out.push_str(&v.to_string());
        first = false;
    }
    out.push('\n');
}

fn parse_int(token: &str, line: usize) -> Result<usize, AlistError> {
    token
        .parse::<usize>()
        .map_err(|_| AlistError::BadToken { line, token: token.to_string() })
}

struct NumberedLine {
    line: usize,
    tokens: Vec<String>,
}

/// Line reader that keeps 1-based line numbers for error reporting. Blank
/// lines are significant inside the adjacency section (degree-0 nodes) but
/// skipped elsewhere.
struct NumberedLines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, &'a str)>,
    last_line: usize,
}

impl<'a> NumberedLines<'a> {
    fn new(text: &'a str) -> Self {
        NumberedLines { iter: text.lines().enumerate(), peeked: None, last_line: 0 }
    }

    fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peeked.take().or_else(|| self.iter.next());
        if let Some((idx, _)) = item {
            self.last_line = idx + 1;
        }
        item
    }

    fn peek_line_number(&mut self) -> usize {
        if self.peeked.is_none() {
            self.peeked = self.iter.next();
        }
        self.peeked.map(|(idx, _)| idx + 1).unwrap_or(self.last_line + 1)
    }

    /// Next non-blank line, tokenized.
    fn next_tokens(&mut self) -> Result<NumberedLine, AlistError> {
        loop {
            match self.next_raw() {
                Some((idx, raw)) => {
                    let tokens: Vec<String> =
                        raw.split_whitespace().map(str::to_string).collect();
                    if !tokens.is_empty() {
                        return Ok(NumberedLine { line: idx + 1, tokens });
                    }
                }
                None => return Err(AlistError::UnexpectedEof { line: self.last_line + 1 }),
            }
        }
    }

    fn degree_list(&mut self, expected: usize) -> Result<Vec<usize>, AlistError> {
        let l = self.next_tokens()?;
        if l.tokens.len() != expected {
            return Err(AlistError::WrongCount {
                line: l.line,
                expected,
                found: l.tokens.len(),
            });
        }
        l.tokens.iter().map(|t| parse_int(t, l.line)).collect()
    }

    /// One adjacency line: exactly `degree` nonzero 1-based indices, with
    /// optional zero padding. A degree-0 node may be a blank line, a line of
    /// zeros, or a missing line at the end of the file.
    fn adjacency_line(&mut self, degree: usize, max: usize) -> Result<Vec<usize>, AlistError> {
        let (line, raw) = match self.next_raw() {
            Some(v) => v,
            None if degree == 0 => return Ok(Vec::new()),
            None => return Err(AlistError::UnexpectedEof { line: self.last_line + 1 }),
        };
        let line = line + 1;
        let mut values = Vec::new();
        let mut padding = 0usize;
        for token in raw.split_whitespace() {
            let v = parse_int(token, line)?;
            if v == 0 {
                padding += 1;
                continue;
            }
            if padding > 0 {
                // Nonzero after padding zeros is not valid alist.
                return Err(AlistError::BadToken { line, token: token.to_string() });
            }
            if v > max {
                return Err(AlistError::IndexOutOfRange { line, index: v, max });
            }
            values.push(v - 1);
        }
        if values.len() != degree {
            return Err(AlistError::DegreeMismatch {
                line,
                declared: degree,
                found: values.len(),
            });
        }
        let mut sorted = values.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(AlistError::DuplicateIndex { line, index: w[0] + 1 });
            }
        }
        Ok(values)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexMapError {
    #[error("user count mismatch: {symbols} symbol counts vs {checks} check counts")]
    LengthMismatch { symbols: usize, checks: usize },
    #[error("at least one user is required")]
    NoUsers,
    #[error("global variable index {index} out of range (total {total})")]
    VariableOutOfRange { index: usize, total: usize },
    #[error("global check index {index} out of range (total {total})")]
    CheckOutOfRange { index: usize, total: usize },
    #[error("user {user} out of range ({users} users)")]
    UserOutOfRange { user: usize, users: usize },
    #[error("local index {index} out of range for user {user}")]
    LocalOutOfRange { user: usize, index: usize },
}

/// The numbering bridge between per-user codes and the joint system.
///
/// Variable nodes of successive users are concatenated, as are their LDPC
/// check nodes; SA slots occupy the first `n_slots` rows of the hybrid
/// matrix, so global check `j` lands on hybrid row `n_slots + j`. All
/// methods are 0-based; heterogeneous code sizes are handled with prefix
/// sums, and the identical-code closed forms fall out as a special case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalIndexMap {
    symbols_per_user: Vec<usize>,
    checks_per_user: Vec<usize>,
    n_slots: usize,
    symbol_prefix: Vec<usize>,
    check_prefix: Vec<usize>,
}

impl GlobalIndexMap {
    pub fn new(
        symbols_per_user: Vec<usize>,
        checks_per_user: Vec<usize>,
        n_slots: usize,
    ) -> Result<Self, IndexMapError> {
        if symbols_per_user.len() != checks_per_user.len() {
            return Err(IndexMapError::LengthMismatch {
                symbols: symbols_per_user.len(),
                checks: checks_per_user.len(),
            });
        }
        if symbols_per_user.is_empty() {
            return Err(IndexMapError::NoUsers);
        }
        let symbol_prefix = prefix_sums(&symbols_per_user);
        let check_prefix = prefix_sums(&checks_per_user);
        Ok(GlobalIndexMap {
            symbols_per_user,
            checks_per_user,
            n_slots,
            symbol_prefix,
            check_prefix,
        })
    }

    pub fn user_count(&self) -> usize {
        self.symbols_per_user.len()
    }

    /// N_v, the total number of variable nodes.
    pub fn total_symbols(&self) -> usize {
        *self.symbol_prefix.last().unwrap()
    }

    /// N_l, the total number of LDPC check nodes.
    pub fn total_checks(&self) -> usize {
        *self.check_prefix.last().unwrap()
    }

    /// N_s, the number of SA slots.
    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn symbols_of_user(&self, user: usize) -> usize {
        self.symbols_per_user[user]
    }

    pub fn checks_of_user(&self, user: usize) -> usize {
        self.checks_per_user[user]
    }

    pub fn user_symbol_range(&self, user: usize) -> std::ops::Range<usize> {
        self.symbol_prefix[user]..self.symbol_prefix[user + 1]
    }

    pub fn user_check_range(&self, user: usize) -> std::ops::Range<usize> {
        self.check_prefix[user]..self.check_prefix[user + 1]
    }

    /// Splits a global variable index into (user, local symbol index).
    pub fn vn_to_local(&self, global: usize) -> Result<(usize, usize), IndexMapError> {
        locate(&self.symbol_prefix, global)
            .ok_or(IndexMapError::VariableOutOfRange { index: global, total: self.total_symbols() })
    }

    pub fn vn_to_global(&self, user: usize, local: usize) -> Result<usize, IndexMapError> {
        self.check_user(user)?;
        if local >= self.symbols_per_user[user] {
            return Err(IndexMapError::LocalOutOfRange { user, index: local });
        }
        Ok(self.symbol_prefix[user] + local)
    }

    /// Splits a global LDPC check index into (user, local check index).
    pub fn cn_to_local(&self, global: usize) -> Result<(usize, usize), IndexMapError> {
        locate(&self.check_prefix, global)
            .ok_or(IndexMapError::CheckOutOfRange { index: global, total: self.total_checks() })
    }

    pub fn cn_to_global(&self, user: usize, local: usize) -> Result<usize, IndexMapError> {
        self.check_user(user)?;
        if local >= self.checks_per_user[user] {
            return Err(IndexMapError::LocalOutOfRange { user, index: local });
        }
        Ok(self.check_prefix[user] + local)
    }

    pub fn user_of_vn(&self, global: usize) -> Result<usize, IndexMapError> {
        Ok(self.vn_to_local(global)?.0)
    }

    /// Hybrid-matrix row of a global LDPC check: the SA band occupies the
    /// first `n_slots` rows, the check bands follow in user order.
    pub fn hybrid_row_of_cn(&self, global: usize) -> Result<usize, IndexMapError> {
        if global >= self.total_checks() {
            return Err(IndexMapError::CheckOutOfRange {
                index: global,
                total: self.total_checks(),
            });
        }
        Ok(self.n_slots + global)
    }

    fn check_user(&self, user: usize) -> Result<(), IndexMapError> {
        if user >= self.user_count() {
            Err(IndexMapError::UserOutOfRange { user, users: self.user_count() })
        } else {
            Ok(())
        }
    }
}

fn prefix_sums(values: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &v in values {
        acc += v;
        out.push(acc);
    }
    out
}

fn locate(prefix: &[usize], global: usize) -> Option<(usize, usize)> {
    if global >= *prefix.last().unwrap() {
        return None;
    }
    let user = prefix.partition_point(|&p| p <= global) - 1;
    Some((user, global - prefix[user]))
}
