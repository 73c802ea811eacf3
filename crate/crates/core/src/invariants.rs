//! Elementary multisymmetric polynomials `σ_t(k)` as descriptors, their exact
//! evaluation at points, and the expansion operator `S ↦ S^[m]`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::orbits::Point;

/// Exponent vector `k = (k_1, ..., k_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiExponent(Vec<u32>);

impl MultiExponent {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::dim("exponent vector must have length >= 1"));
        }
        Ok(MultiExponent(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero entries.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&k| k != 0).count()
    }
}

/// The descriptor `(t, k)` of `σ_t(k)`; `t = 1` is the power sum `tr(k)`.
///
/// Ordered by `t`, then total degree, then `k` in descending lexicographic
/// order, e.g. `tr(1,0) < tr(0,1) < tr(2,0) < tr(1,1) < tr(0,2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariant {
    t: u32,
    k: MultiExponent,
}

impl Invariant {
    pub fn new(t: u32, k: Vec<u32>) -> Result<Self> {
        if t == 0 {
            return Err(Error::DegreeOutOfRange { t, n: 0 });
        }
        Ok(Invariant {
            t,
            k: MultiExponent::new(k)?,
        })
    }

    /// `tr(k) = σ_1(k)`.
    pub fn tr(k: Vec<u32>) -> Result<Self> {
        Self::new(1, k)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn k(&self) -> &MultiExponent {
        &self.k
    }

    pub fn m(&self) -> usize {
        self.k.len()
    }

    /// `t·k`, the multidegree of `σ_t(k)`.
    pub fn multidegree(&self) -> MultiExponent {
        MultiExponent(self.k.0.iter().map(|&k| self.t * k).collect())
    }
}

impl Ord for Invariant {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t
            .cmp(&other.t)
            .then_with(|| self.k.total().cmp(&other.k.total()))
            .then_with(|| other.k.cmp(&self.k))
    }
}

impl PartialOrd for Invariant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k: Vec<String> = self.k.0.iter().map(u32::to_string).collect();
        if self.t == 1 {
            write!(f, "tr({})", k.join(","))
        } else {
            write!(f, "sigma_{}({})", self.t, k.join(","))
        }
    }
}

/// Product of `row[j]^k_j`: the row monomial `x^k_i`.
pub fn row_monomial<F: Field>(field: &F, row: &[F::Elem], k: &MultiExponent) -> F::Elem {
    row.iter()
        .zip(k.entries())
        .filter(|(_, &e)| e != 0)
        .fold(field.one(), |acc, (x, &e)| {
            field.mul(&acc, &field.pow(x, e))
        })
}

/// Coefficient of `z^t` in `Π_i (1 + z·v_i)`, in `O(n·t)` operations.
pub fn elementary_symmetric<F: Field>(field: &F, values: &[F::Elem], t: usize) -> F::Elem {
    if t == 1 {
        return values
            .iter()
            .fold(field.zero(), |acc, v| field.add(&acc, v));
    }
    let mut e = vec![field.zero(); t + 1];
    e[0] = field.one();
    for (i, v) in values.iter().enumerate() {
        for j in (1..=t.min(i + 1)).rev() {
            let term = field.mul(&e[j - 1], v);
            e[j] = field.add(&e[j], &term);
        }
    }
    e.swap_remove(t)
}

/// `x^k_i` for 0-based row index `i`.
pub fn eval_row_monomial<F: Field>(
    field: &F,
    p: &Point<F::Elem>,
    i: usize,
    k: &MultiExponent,
) -> Result<F::Elem> {
    if k.len() != p.m() {
        return Err(Error::dim(format!(
            "exponent of length {} on a point with m = {}",
            k.len(),
            p.m()
        )));
    }
    if i >= p.n() {
        return Err(Error::dim(format!(
            "row {i} out of range for n = {}",
            p.n()
        )));
    }
    Ok(row_monomial(field, p.row(i), k))
}

pub(crate) fn check_degree(f: &Invariant, n: usize) -> Result<()> {
    if f.t as usize > n {
        return Err(Error::DegreeOutOfRange { t: f.t, n });
    }
    Ok(())
}

/// Evaluates `σ_t(k)` at `p`.
pub fn eval_invariant<F: Field>(field: &F, f: &Invariant, p: &Point<F::Elem>) -> Result<F::Elem> {
    check_degree(f, p.n())?;
    if f.m() != p.m() {
        return Err(Error::dim(format!(
            "{f} has m = {}, point has m = {}",
            f.m(),
            p.m()
        )));
    }
    let values: Vec<F::Elem> = p.rows().map(|row| row_monomial(field, row, &f.k)).collect();
    Ok(elementary_symmetric(field, &values, f.t as usize))
}

/// All strictly increasing `m0`-tuples over `0..m`, lexicographically.
pub fn admissible_tuples(m0: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    if m0 == 0 || m0 > m {
        return Err(Error::Precondition(format!(
            "need 1 <= m0 <= m, got m0 = {m0}, m = {m}"
        )));
    }
    let mut out = Vec::new();
    let mut tuple: Vec<usize> = (0..m0).collect();
    loop {
        out.push(tuple.clone());
        // Advance the rightmost position that still has room.
        let Some(i) = (0..m0).rev().find(|&i| tuple[i] < m - m0 + i) else {
            return Ok(out);
        };
        tuple[i] += 1;
        for l in i + 1..m0 {
            tuple[l] = tuple[l - 1] + 1;
        }
    }
}

/// `f^(j)`: places `k_s` at position `j_s` of a length-`m` exponent.
pub fn expand_invariant(f: &Invariant, j: &[usize], m: usize) -> Result<Invariant> {
    let admissible =
        j.len() == f.m() && j.windows(2).all(|w| w[0] < w[1]) && j.last().is_some_and(|&l| l < m);
    if !admissible {
        return Err(Error::NotAdmissible {
            tuple: j.to_vec(),
            m,
        });
    }
    let mut k = vec![0; m];
    for (&pos, &e) in j.iter().zip(f.k.entries()) {
        k[pos] = e;
    }
    Ok(Invariant {
        t: f.t,
        k: MultiExponent(k),
    })
}

/// A duplicate-free set of invariants on a common number `m` of variable sets,
/// kept in the [`Invariant`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantSet {
    m: usize,
    elements: BTreeSet<Invariant>,
}

impl InvariantSet {
    pub fn empty(m: usize) -> Self {
        InvariantSet {
            m,
            elements: BTreeSet::new(),
        }
    }

    pub fn new(m: usize, elements: impl IntoIterator<Item = Invariant>) -> Result<Self> {
        let mut set = Self::empty(m);
        for f in elements {
            set.insert(f)?;
        }
        Ok(set)
    }

    /// Returns whether `f` was newly inserted.
    pub fn insert(&mut self, f: Invariant) -> Result<bool> {
        if f.m() != self.m {
            return Err(Error::dim(format!(
                "{f} does not live on m = {} variable sets",
                self.m
            )));
        }
        Ok(self.elements.insert(f))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &Invariant) -> bool {
        self.elements.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Invariant> {
        self.elements.iter()
    }

    /// `S ∖ {f}`.
    pub fn without(&self, f: &Invariant) -> InvariantSet {
        let mut s = self.clone();
        s.elements.remove(f);
        s
    }

    pub fn union(&self, other: &InvariantSet) -> Result<InvariantSet> {
        let mut s = self.clone();
        for f in other.iter() {
            s.insert(f.clone())?;
        }
        Ok(s)
    }

    pub fn is_subset(&self, other: &InvariantSet) -> bool {
        self.m == other.m && self.elements.is_subset(&other.elements)
    }

    /// Largest `t` present, 0 for the empty set.
    pub fn max_t(&self) -> u32 {
        self.elements.iter().map(Invariant::t).max().unwrap_or(0)
    }

    /// Rejects elements with `t > n`.
    pub fn check_degrees(&self, n: usize) -> Result<()> {
        self.elements.iter().try_for_each(|f| check_degree(f, n))
    }

    /// Text format: `m <m>` header, then one `sigma <t> <k_1> ... <k_m>` line
    /// per element. `#` lines and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut set: Option<InvariantSet> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let nums = |toks: std::str::SplitWhitespace<'_>| -> Result<Vec<u32>> {
                toks.map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::parse(line_no, format!("bad number `{t}`")))
                })
                .collect()
            };
            match toks.next() {
                Some("m") => {
                    if set.is_some() {
                        return Err(Error::parse(line_no, "duplicate `m` header"));
                    }
                    let v = nums(toks)?;
                    match v.as_slice() {
                        [m] if *m >= 1 => set = Some(InvariantSet::empty(*m as usize)),
                        _ => {
                            return Err(Error::parse(line_no, "header must be `m <m>` with m >= 1"))
                        }
                    }
                }
                Some("sigma") => {
                    let s = set
                        .as_mut()
                        .ok_or_else(|| Error::parse(line_no, "missing `m <m>` header"))?;
                    let v = nums(toks)?;
                    if v.len() != s.m + 1 {
                        return Err(Error::parse(
                            line_no,
                            format!("expected t and {} exponents", s.m),
                        ));
                    }
                    if v[0] == 0 {
                        return Err(Error::parse(line_no, "t must be >= 1"));
                    }
                    let f = Invariant {
                        t: v[0],
                        k: MultiExponent(v[1..].to_vec()),
                    };
                    if !s.insert(f)? {
                        return Err(Error::parse(line_no, "duplicate element"));
                    }
                }
                Some(other) => {
                    return Err(Error::parse(
                        line_no,
                        format!("unexpected keyword `{other}`"),
                    ))
                }
                None => unreachable!("blank lines are skipped"),
            }
        }
        set.ok_or_else(|| Error::parse(0, "missing `m <m>` header"))
    }

    /// Canonical text form; `parse(to_text(S)) == S` and the text round-trips
    /// byte for byte.
    pub fn to_text(&self) -> String {
        let mut out = format!("m {}\n", self.m);
        for f in &self.elements {
            out.push_str(&format!("sigma {}", f.t));
            for e in f.k.entries() {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a InvariantSet {
    type Item = &'a Invariant;
    type IntoIter = std::collections::btree_set::Iter<'a, Invariant>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// `S^[m]`: all `f^(j)` for `f ∈ S` and `m`-admissible `j`.
pub fn expand_set(s: &InvariantSet, m: usize) -> Result<InvariantSet> {
    if m < s.m {
        return Err(Error::ExpansionTarget { from: s.m, to: m });
    }
    let tuples = admissible_tuples(s.m, m)?;
    let mut out = InvariantSet::empty(m);
    for f in s {
        for j in &tuples {
            out.elements.insert(expand_invariant(f, j, m)?);
        }
    }
    Ok(out)
}

/// Every `σ_t(k) ∈ S` has `σ_l(k) ∈ S` for all `1 <= l <= t`.
pub fn is_elementary_set(s: &InvariantSet) -> bool {
    s.iter().all(|f| {
        (1..f.t).all(|l| {
            s.contains(&Invariant {
                t: l,
                k: f.k.clone(),
            })
        })
    })
}

/// For every `σ_t(k) ∈ S` and zero entry `k_i`, moving that zero to any
/// position yields an element of `S`.
pub fn satisfies_condition_c(s: &InvariantSet) -> bool {
    s.iter().all(|f| {
        let k = f.k.entries();
        k.iter().enumerate().filter(|(_, &e)| e == 0).all(|(i, _)| {
            let mut rest = k.to_vec();
            rest.remove(i);
            (0..k.len()).all(|pos| {
                let mut r = rest.clone();
                r.insert(pos, 0);
                s.contains(&Invariant {
                    t: f.t,
                    k: MultiExponent(r),
                })
            })
        })
    })
}
