//! Orbit-representative enumeration over coordinate grids.
//!
//! A row of a grid point is encoded as the base-`c` number of its coordinate
//! indices (first column most significant), so lexicographic order on rows is
//! numeric order on codes. An orbit under `S_n` is a multiset of rows; its
//! least member in enumeration order is the point with non-decreasing row
//! codes, which is what we enumerate.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::invariants::{elementary_symmetric, row_monomial, InvariantSet};
use crate::orbits::Point;
use crate::partitions::factorial;

/// Sorted row codes of an orbit representative.
pub(crate) type Rep = SmallVec<[u32; 4]>;

const MAX_ROWS: u64 = 1 << 22;

/// Geometry of a grid: `c` coordinates per entry, `m` entries per row.
#[derive(Clone, Copy, Debug)]
pub(crate) struct GridShape {
    pub c: u32,
    pub m: usize,
    pub rows: u32,
}

impl GridShape {
    pub fn new(c: usize, m: usize) -> Result<Self> {
        let rows = (c as u64)
            .checked_pow(m as u32)
            .filter(|&r| r <= MAX_ROWS)
            .ok_or_else(|| {
                Error::InvalidDomain(format!(
                    "{c}^{m} distinct rows exceeds the supported {MAX_ROWS}"
                ))
            })?;
        Ok(GridShape {
            c: c as u32,
            m,
            rows: rows as u32,
        })
    }

    /// Coordinate indices of a row, first column first.
    pub fn digits(&self, mut code: u32) -> SmallVec<[u32; 8]> {
        let mut d: SmallVec<[u32; 8]> = SmallVec::from_elem(0, self.m);
        for j in (0..self.m).rev() {
            d[j] = code % self.c;
            code /= self.c;
        }
        d
    }

    pub fn max_digit(&self, code: u32) -> u32 {
        self.digits(code).into_iter().max().unwrap_or(0)
    }

    pub fn point<E: Clone + Ord>(&self, coords: &[E], rep: &[u32]) -> Point<E> {
        let rows = rep
            .iter()
            .map(|&code| {
                self.digits(code)
                    .into_iter()
                    .map(|d| coords[d as usize].clone())
                    .collect()
            })
            .collect();
        Point::from_rows(rows).expect("n, m >= 1")
    }
}

/// Row monomials `x^k` for every row code and every invariant of a set.
pub(crate) struct RowTable<E> {
    width: usize,
    degrees: Vec<usize>,
    values: Vec<E>,
}

impl<E: Clone> RowTable<E> {
    pub fn new<F: Field<Elem = E>>(
        field: &F,
        set: &InvariantSet,
        shape: GridShape,
        coords: &[E],
    ) -> Self {
        let width = set.len();
        let mut values = Vec::with_capacity(shape.rows as usize * width);
        for code in 0..shape.rows {
            let row: Vec<E> = shape
                .digits(code)
                .into_iter()
                .map(|d| coords[d as usize].clone())
                .collect();
            values.extend(set.iter().map(|f| row_monomial(field, &row, f.k())));
        }
        RowTable {
            width,
            degrees: set.iter().map(|f| f.t() as usize).collect(),
            values,
        }
    }

    /// Value of the `j`-th invariant at the point with the given rows.
    pub fn eval<F: Field<Elem = E>>(
        &self,
        field: &F,
        rep: &[u32],
        j: usize,
        scratch: &mut Vec<E>,
    ) -> E {
        scratch.clear();
        scratch.extend(
            rep.iter()
                .map(|&r| self.values[r as usize * self.width + j].clone()),
        );
        elementary_symmetric(field, scratch, self.degrees[j])
    }

    /// Full fingerprint into `out`.
    pub fn fingerprint<F: Field<Elem = E>>(
        &self,
        field: &F,
        rep: &[u32],
        out: &mut Vec<E>,
        scratch: &mut Vec<E>,
    ) {
        out.clear();
        for j in 0..self.width {
            let v = self.eval(field, rep, j, scratch);
            out.push(v);
        }
    }
}

/// Number of points in the orbit of a representative: `n! / Π mult!`.
pub(crate) fn orbit_size(rep: &[u32]) -> u128 {
    let mut size = factorial(rep.len());
    let mut run = 1;
    for w in rep.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            size /= factorial(run);
            run = 1;
        }
    }
    size / factorial(run)
}

/// Calls `visit` on every non-decreasing `n`-sequence over `rows` whose first
/// element is `rows[first]`, in lexicographic order.
pub(crate) fn for_each_rep_starting_at(
    rows: &[u32],
    n: usize,
    first: usize,
    mut visit: impl FnMut(&Rep) -> bool,
) {
    let len = rows.len();
    let mut idx: SmallVec<[usize; 8]> = SmallVec::from_elem(first, n);
    let mut rep: Rep = SmallVec::from_elem(rows[first], n);
    loop {
        if !visit(&rep) {
            return;
        }
        // Odometer over positions 1..n; position 0 stays fixed.
        let Some(pos) = (1..n).rev().find(|&p| idx[p] + 1 < len) else {
            return;
        };
        idx[pos] += 1;
        for p in pos + 1..n {
            idx[p] = idx[pos];
        }
        for p in pos..n {
            rep[p] = rows[idx[p]];
        }
    }
}

/// Number of size-`n` multisets over `r` rows.
pub(crate) fn multiset_count(r: u128, n: usize) -> u128 {
    crate::catalog::binomial(r + n as u128 - 1, n as u128)
}
