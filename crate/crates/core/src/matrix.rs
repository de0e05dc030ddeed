//! Exponent matrices `A = (a_ij)` indexing ordered monomials `Z^A`.
//!
//! Indices are 0-based in the Rust API. The derived ordering compares `n`
//! first and then the entries in row-major reading order, which is the
//! lexicographic order used for the triangular basis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `Z_ij` (0-based `(row, col)`). Letters compare row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub row: usize,
    pub col: usize,
}

impl Letter {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub const fn transpose(self) -> Self {
        Self {
            row: self.col,
            col: self.row,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}{}", self.row + 1, self.col + 1)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl ExpMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1; n])
    }

    pub fn diag(d: &[u32]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// The matrix with a single 1 at `(row, col)`.
    pub fn unit(n: usize, l: Letter) -> Self {
        let mut m = Self::zeros(n);
        m.set(l.row, l.col, 1);
        m
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Malformed("matrix has no rows".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    r.len()
                )));
            }
            entries.extend_from_slice(r);
        }
        Ok(Self { n, entries })
    }

    /// Panicking shorthand for literals in tests and examples.
    pub fn from_rows_unchecked<R: AsRef<[u32]>>(rows: &[R]) -> Self {
        Self::from_rows(rows).expect("square matrix")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&a| a == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { n: self.n, entries })
    }

    /// Entry-wise difference, `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.n != other.n {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { n: self.n, entries })
    }

    pub fn add_letter(&self, l: Letter) -> Self {
        let mut m = self.clone();
        m.entries[l.row * self.n + l.col] += 1;
        m
    }

    pub fn remove_letter(&self, l: Letter) -> Option<Self> {
        let k = l.row * self.n + l.col;
        let mut m = self.clone();
        m.entries[k] = m.entries[k].checked_sub(1)?;
        Some(m)
    }

    /// The lexicographically largest generator occurring in `Z^A`.
    pub fn max_letter(&self) -> Option<Letter> {
        self.entries
            .iter()
            .rposition(|&a| a > 0)
            .map(|k| Letter::new(k / self.n, k % self.n))
    }

    /// The letters of `Z^A` in lexicographic order, `(i, j)` repeated `a_ij` times.
    pub fn word(&self) -> Vec<Letter> {
        let mut w = Vec::with_capacity(self.total() as usize);
        for i in 0..self.n {
            for j in 0..self.n {
                for _ in 0..self.get(i, j) {
                    w.push(Letter::new(i, j));
                }
            }
        }
        w
    }

    /// Exponent `e` with `D(A) = q^-e` and `E(A) = q^-2e`: the sum of
    /// `a_ij a_ik` over pairs of distinct cells sharing a row, plus the same
    /// over pairs sharing a column.
    pub fn d_exponent(&self) -> i64 {
        let n = self.n;
        let mut e = 0i64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..j {
                    e += i64::from(self.get(i, j)) * i64::from(self.get(i, k));
                    e += i64::from(self.get(j, i)) * i64::from(self.get(k, i));
                }
            }
        }
        e
    }

    /// `Pr(A, s, t)`: the sum of the top-left `s x t` corner.
    pub fn pr(&self, s: usize, t: usize) -> u32 {
        (0..s.min(self.n))
            .map(|i| (0..t.min(self.n)).map(|j| self.get(i, j)).sum::<u32>())
            .sum()
    }

    /// `a_ij >= a_{i+1,j+1}` everywhere.
    pub fn is_ladder(&self) -> bool {
        let n = self.n;
        (0..n.saturating_sub(1))
            .all(|i| (0..n - 1).all(|j| self.get(i, j) >= self.get(i + 1, j + 1)))
    }

    /// Constant along every diagonal except possibly the main one.
    pub fn is_striped(&self) -> bool {
        let n = self.n;
        (0..n.saturating_sub(1))
            .all(|i| (0..n - 1).all(|j| i == j || self.get(i, j) == self.get(i + 1, j + 1)))
    }

    pub fn min_diagonal(&self) -> u32 {
        (0..self.n).map(|i| self.get(i, i)).min().unwrap_or(0)
    }

    /// All matrices reachable by one 2x2 move: for `i < s`, `j < t` with
    /// `a_ij, a_st > 0`, take one unit from each of `(i,j)`, `(s,t)` and
    /// add one to `(i,t)`, `(s,j)`.
    pub fn submatrix_moves(&self) -> Vec<ExpMatrix> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) == 0 {
                    continue;
                }
                for s in i + 1..n {
                    for t in j + 1..n {
                        if self.get(s, t) == 0 {
                            continue;
                        }
                        let mut b = self.clone();
                        b.set(i, j, b.get(i, j) - 1);
                        b.set(s, t, b.get(s, t) - 1);
                        b.set(i, t, b.get(i, t) + 1);
                        b.set(s, j, b.get(s, j) + 1);
                        out.push(b);
                    }
                }
            }
        }
        out
    }

    /// CLI literal: rows separated by `;`, entries by `,`.
    pub fn to_literal(&self) -> String {
        self.rows()
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Debug for ExpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, a) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Serialize for ExpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u32>>::deserialize(d)?;
        Self::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl FromStr for ExpMatrix {
    type Err = Error;

    /// Parses the CLI literal `"1,0;0,1"`. Rejects negatives, ragged and
    /// non-square input, reporting the byte offset of the offending entry.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut offset = 0;
        for row in s.split(';') {
            let mut r = Vec::new();
            let mut col_offset = offset;
            for entry in row.split(',') {
                let trimmed = entry.trim();
                let pos = col_offset + (entry.len() - entry.trim_start().len());
                if trimmed.starts_with('-') {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("negative entry '{trimmed}'"),
                    });
                }
                let v = trimmed.parse::<u32>().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("'{trimmed}' is not a nonnegative integer"),
                })?;
                r.push(v);
                col_offset += entry.len() + 1;
            }
            if let Some(first) = rows.first() {
                if r.len() != first.len() {
                    return Err(Error::Parse {
                        pos: offset,
                        msg: format!(
                            "ragged rows: row {} has {} entries, row 1 has {}",
                            rows.len() + 1,
                            r.len(),
                            first.len()
                        ),
                    });
                }
            }
            rows.push(r);
            offset += row.len() + 1;
        }
        if rows[0].len() != rows.len() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!(
                    "matrix is {}x{}, expected square",
                    rows.len(),
                    rows[0].len()
                ),
            });
        }
        Self::from_rows(&rows)
    }
}

/// All `n x n` matrices with the given margins, ascending in lex order.
///
/// Empty when the margins have different totals.
pub fn enumerate_margins(rows: &[u32], cols: &[u32]) -> Vec<ExpMatrix> {
    let n = rows.len();
    assert_eq!(
        n,
        cols.len(),
        "row and column margin vectors differ in length"
    );
    if rows.iter().sum::<u32>() != cols.iter().sum::<u32>() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut m = ExpMatrix::zeros(n);
    let mut col_left = cols.to_vec();
    fill(&mut m, 0, rows[0], rows, &mut col_left, &mut out);
    out
}

// Row-major depth-first fill with entries tried in increasing order, so
// matrices come out lex-ascending. The last cell of each row and every cell
// of the last row are forced by the margins.
fn fill(
    m: &mut ExpMatrix,
    k: usize,
    row_left: u32,
    rows: &[u32],
    col_left: &mut [u32],
    out: &mut Vec<ExpMatrix>,
) {
    let n = m.n;
    if k == n * n {
        out.push(m.clone());
        return;
    }
    let (i, j) = (k / n, k % n);
    let hi = row_left.min(col_left[j]);
    let (lo, hi) = match (i == n - 1, j == n - 1) {
        (_, true) => (row_left, row_left),
        (true, false) => (col_left[j], col_left[j]),
        (false, false) => (0, hi),
    };
    if hi > row_left.min(col_left[j]) {
        return;
    }
    for v in lo..=hi {
        m.set(i, j, v);
        col_left[j] -= v;
        let next = if j == n - 1 {
            rows.get(i + 1).copied().unwrap_or(0)
        } else {
            row_left - v
        };
        fill(m, k + 1, next, rows, col_left, out);
        col_left[j] += v;
    }
    m.set(i, j, 0);
}

/// All `n x n` matrices with entry total exactly `d`, lex-ascending.
pub fn matrices_of_total(n: usize, d: u32) -> Vec<ExpMatrix> {
    let cells = n * n;
    let mut out = Vec::new();
    let mut entries = vec![0u32; cells];
    compositions(&mut entries, 0, d, &mut out, n);
    out.sort();
    out
}

fn compositions(entries: &mut [u32], k: usize, left: u32, out: &mut Vec<ExpMatrix>, n: usize) {
    if k == entries.len() - 1 {
        entries[k] = left;
        out.push(ExpMatrix {
            n,
            entries: entries.to_vec(),
        });
        entries[k] = 0;
        return;
    }
    for v in 0..=left {
        entries[k] = v;
        compositions(entries, k + 1, left - v, out, n);
    }
    entries[k] = 0;
}

/// All `n x n` matrices with entry total at most `max_total`, by total then lex.
pub fn matrices_up_to_total(n: usize, max_total: u32) -> Vec<ExpMatrix> {
    (0..=max_total)
        .flat_map(|d| matrices_of_total(n, d))
        .collect()
}

/// All `n x n` matrices with every entry in `0..=max_entry`, lex-ascending.
pub fn matrices_with_entries_up_to(n: usize, max_entry: u32) -> Vec<ExpMatrix> {
    let cells = n * n;
    let base = max_entry as usize + 1;
    let count = base.pow(cells as u32);
    let mut out = Vec::with_capacity(count);
    for mut code in 0..count {
        let mut entries = vec![0u32; cells];
        for e in entries.iter_mut().rev() {
            *e = (code % base) as u32;
            code /= base;
        }
        out.push(ExpMatrix { n, entries });
    }
    out
}
