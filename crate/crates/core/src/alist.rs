//! Reading and writing parity-check matrices in the alist text format.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices of each column, zero padded>
//! <m lines: 1-based column indices of each row, zero padded>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::code::LinearCode;
use crate::error::CodeError;
use crate::gf2::BitMatrix;

struct Lines<'a> {
    inner: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { inner, pos: 0 }
    }

    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), CodeError> {
        let Some(&(line, text)) = self.inner.get(self.pos) else {
            let line = self.inner.last().map_or(1, |l| l.0 + 1);
            return Err(err(line, format!("unexpected end of input, expected {what}")));
        };
        self.pos += 1;
        let nums = text
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| err(line, format!("non-numeric token `{tok}` in {what}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((line, nums))
    }
}

fn err(line: usize, message: String) -> CodeError {
    CodeError::Alist { line, message }
}

/// Parses the adjacency of an alist file into a parity-check matrix.
pub fn parse_matrix(text: &str) -> Result<BitMatrix, CodeError> {
    let mut lines = Lines::new(text);

    let (line, dims) = lines.next_numbers("dimensions `n m`")?;
    let [n, m] = dims[..] else {
        return Err(err(line, format!("expected 2 numbers `n m`, found {}", dims.len())));
    };
    if n == 0 || m == 0 {
        return Err(err(line, "dimensions must be positive".into()));
    }
    let (line, maxes) = lines.next_numbers("maximum degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(err(line, format!("expected 2 maximum degrees, found {}", maxes.len())));
    };

    let (line, col_deg) = lines.next_numbers("column degrees")?;
    check_degrees(line, &col_deg, n, max_col, "column")?;
    let (line, row_deg) = lines.next_numbers("row degrees")?;
    check_degrees(line, &row_deg, m, max_row, "row")?;

    let mut h = BitMatrix::zeros(m, n);
    for (col, &deg) in col_deg.iter().enumerate() {
        let (line, entries) = lines.next_numbers("column adjacency")?;
        let idx = adjacency(line, &entries, deg, max_col, m, "row")?;
        for r in idx {
            if h.get(r, col) {
                return Err(err(line, format!("row {} listed twice for column {}", r + 1, col + 1)));
            }
            h.set(r, col, true);
        }
    }
    for (row, &deg) in row_deg.iter().enumerate() {
        let (line, entries) = lines.next_numbers("row adjacency")?;
        let mut idx = adjacency(line, &entries, deg, max_row, n, "column")?;
        idx.sort_unstable();
        if idx != h.row_support(row) {
            return Err(err(line, format!("row {} adjacency disagrees with the column lists", row + 1)));
        }
    }
    if let Some(&(line, _)) = lines.inner.get(lines.pos) {
        return Err(err(line, "unexpected trailing data".into()));
    }
    Ok(h)
}

fn check_degrees(line: usize, deg: &[usize], count: usize, max: usize, kind: &str) -> Result<(), CodeError> {
    if deg.len() != count {
        return Err(err(line, format!("expected {count} {kind} degrees, found {}", deg.len())));
    }
    if let Some(d) = deg.iter().find(|&&d| d > max) {
        return Err(err(line, format!("{kind} degree {d} exceeds declared maximum {max}")));
    }
    Ok(())
}

fn adjacency(
    line: usize,
    entries: &[usize],
    degree: usize,
    max: usize,
    bound: usize,
    kind: &str,
) -> Result<Vec<usize>, CodeError> {
    if entries.len() < degree || entries.len() > max.max(degree) {
        return Err(err(line, format!("expected {degree} {kind} indices (padded to at most {max}), found {}", entries.len())));
    }
    let (listed, padding) = entries.split_at(degree);
    if padding.iter().any(|&p| p != 0) {
        return Err(err(line, "nonzero entry in padding".into()));
    }
    listed
        .iter()
        .map(|&i| {
            if i == 0 || i > bound {
                Err(err(line, format!("{kind} index {i} out of range 1..={bound}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

/// Parses an alist file into a code.
pub fn parse_alist(name: impl Into<String>, text: &str) -> Result<LinearCode, CodeError> {
    LinearCode::from_parity_check(name, parse_matrix(text)?)
}

pub fn read_alist(path: &Path) -> Result<LinearCode, std::io::Error> {
    let text = std::fs::read_to_string(path)?;
    let name = path.file_name().map_or_else(|| "alist".to_string(), |s| s.to_string_lossy().into_owned());
    parse_alist(name, &text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

/// Emits `h` in alist format with zero padding to the maximum degrees.
pub fn emit_matrix(h: &BitMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let rows: Vec<Vec<usize>> = (0..m).map(|j| h.row_support(j)).collect();
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, r) in rows.iter().enumerate() {
        for &i in r {
            cols[i].push(j);
        }
    }
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(cols.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(rows.iter().map(Vec::len)));
    for c in &cols {
        let _ = writeln!(out, "{}", padded(c, max_col));
    }
    for r in &rows {
        let _ = writeln!(out, "{}", padded(r, max_row));
    }
    out
}

pub fn emit_alist(code: &LinearCode) -> String {
    emit_matrix(code.parity_check())
}

fn join(it: impl Iterator<Item = usize>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn padded(idx: &[usize], width: usize) -> String {
    join(idx.iter().map(|&i| i + 1).chain(std::iter::repeat_n(0, width - idx.len())))
}
