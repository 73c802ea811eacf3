//! Points of `V^m`, the diagonal `S_n` action and the orbit oracle.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::partitions::Permutation;

/// An `n x m` matrix of field elements. Row `i` holds the `i`-th coordinate of
/// every vector `a_1, ..., a_m`; column `j` is the vector `a_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<E> {
    n: usize,
    m: usize,
    entries: Vec<E>,
}

impl<E: Clone + Ord> Point<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::dim("a point needs at least one row"));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::dim("a point needs at least one column"));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::dim(format!(
                "row {} has {} entries, expected {m}",
                i + 1,
                r.len()
            )));
        }
        Ok(Point {
            n,
            m,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a point from its column vectors `a_1, ..., a_m`.
    pub fn from_columns(cols: Vec<Vec<E>>) -> Result<Self> {
        let m = cols.len();
        if m == 0 || cols[0].is_empty() {
            return Err(Error::dim("a point needs at least one row and column"));
        }
        let n = cols[0].len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::dim("columns have different lengths"));
        }
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        self.entries.chunks(self.m)
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        self.rows().map(|r| r[j].clone()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.entries[i * self.m + j] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    /// Diagonal action: row `s(i)` of the result is row `i` of `self`.
    pub fn apply_perm(&self, s: &Permutation) -> Result<Self> {
        if s.n() != self.n {
            return Err(Error::dim(format!(
                "permutation on {} points acting on n = {}",
                s.n(),
                self.n
            )));
        }
        let mut rows: Vec<Option<&[E]>> = vec![None; self.n];
        for (i, row) in self.rows().enumerate() {
            rows[s.image(i)] = Some(row);
        }
        let entries = rows
            .into_iter()
            .flat_map(|r| r.expect("bijection").iter().cloned())
            .collect();
        Ok(Point {
            n: self.n,
            m: self.m,
            entries,
        })
    }

    /// Rows sorted lexicographically; a distinguished orbit representative.
    pub fn canonical_form(&self) -> Self {
        let mut rows: Vec<&[E]> = self.rows().collect();
        rows.sort();
        let entries = rows.into_iter().flat_map(|r| r.iter().cloned()).collect();
        Point {
            n: self.n,
            m: self.m,
            entries,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.rows().zip(self.rows().skip(1)).all(|(a, b)| a <= b)
    }

    /// Replaces every entry by `f(entry)`.
    pub fn map<T: Clone + Ord>(&self, f: impl FnMut(&E) -> T) -> Point<T> {
        Point {
            n: self.n,
            m: self.m,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// True iff `p` and `q` lie in one `S_n` orbit.
pub fn same_orbit<E: Clone + Ord>(p: &Point<E>, q: &Point<E>) -> Result<bool> {
    if p.n != q.n || p.m != q.m {
        return Err(Error::dim(format!(
            "points of shape {}x{} and {}x{}",
            p.n, p.m, q.n, q.m
        )));
    }
    Ok(p.canonical_form() == q.canonical_form())
}

/// Parses the point text format: `n` lines of `m` whitespace-separated
/// elements. Blank lines and `#` comments are skipped.
pub fn parse_point<F: Field>(field: &F, text: &str) -> Result<Point<F::Elem>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| field.parse_elem(tok).map_err(|e| relocate(e, lineno + 1)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Point::from_rows(rows)
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

impl<E: fmt::Display> fmt::Display for Point<E> {
    /// Point text format, one row per line, no trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.m).enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}
