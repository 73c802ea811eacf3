//! Named invariant sets: the generating set `M_m`, the expanded separating
//! set `S_m`, the minimal separating sets `T_{n,m}` for `n <= 4`, and `CX:S3`,
//! a separating expansion that is not minimal because its base set violates
//! condition (c).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{char_ok_for, FieldSpec};
use crate::invariants::{expand_set, Invariant, InvariantSet};
use crate::partitions::factorial;

/// `⌊n/2⌋ + 1`, an upper bound for the expansion threshold.
pub fn m0_of(n: usize) -> usize {
    n / 2 + 1
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Every `k ∈ N^m` with `lo <= |k| <= hi`, in lexicographic order.
fn exponents_with_total(m: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, prefix: &mut Vec<u32>, budget: u32, lo: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m {
            let used: u32 = prefix.iter().sum();
            if used >= lo {
                out.push(prefix.clone());
            }
            return;
        }
        let used: u32 = prefix.iter().sum();
        for e in 0..=budget - used {
            prefix.push(e);
            rec(m, prefix, budget, lo, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, &mut Vec::with_capacity(m), hi, lo, &mut out);
    out
}

/// `M_m`: all power sums `tr(k)` with `1 <= |k| <= n`.
pub fn build_m(n: usize, m: usize) -> Result<InvariantSet> {
    if n == 0 || m == 0 {
        return Err(Error::Catalog(format!(
            "M needs n, m >= 1 (got n = {n}, m = {m})"
        )));
    }
    InvariantSet::new(
        m,
        exponents_with_total(m, 1, n as u32)
            .into_iter()
            .map(|k| Invariant::tr(k).expect("m >= 1")),
    )
}

/// `S_m = M_m` for `m <= m0`, `(M_{m0})^[m]` otherwise.
pub fn build_s(n: usize, m: usize) -> Result<InvariantSet> {
    let m0 = m0_of(n);
    if m <= m0 {
        build_m(n, m)
    } else {
        expand_set(&build_m(n, m0)?, m)
    }
}

/// `|M_m| = C(m+n, n) - 1`.
pub fn size_m(n: usize, m: usize) -> u128 {
    binomial((m + n) as u128, n as u128) - 1
}

/// `|S_m|`, counted by support size: an exponent survives the expansion iff
/// it has at most `m0` nonzero entries, and there are `C(n, s)` positive
/// `s`-vectors of total at most `n`.
pub fn size_s(n: usize, m: usize) -> u128 {
    (1..=m0_of(n).min(m).min(n))
        .map(|s| binomial(m as u128, s as u128) * binomial(n as u128, s as u128))
        .sum()
}

fn power_sums(spec: &[&[u32]]) -> Vec<Invariant> {
    spec.iter()
        .map(|k| Invariant::tr(k.to_vec()).expect("nonempty"))
        .collect()
}

fn two_set_base(n: usize) -> Vec<Invariant> {
    let mut out = Vec::new();
    for r in 1..=n as u32 {
        out.extend(power_sums(&[&[r, 0], &[0, r]]));
    }
    match n {
        2 => out.extend(power_sums(&[&[1, 1]])),
        3 => out.extend(power_sums(&[&[1, 1], &[2, 1]])),
        4 => out.extend(power_sums(&[&[1, 1], &[2, 1], &[1, 2], &[3, 1]])),
        _ => unreachable!("checked by caller"),
    }
    out
}

/// The minimal separating set `T_{n,m}` for `n ∈ {2,3,4}`, `m >= 2`.
pub fn build_t(n: usize, m: usize) -> Result<InvariantSet> {
    if !(2..=4).contains(&n) {
        return Err(Error::Catalog(format!(
            "T is only known for n in {{2,3,4}}, got n = {n}"
        )));
    }
    if m < 2 {
        return Err(Error::Catalog(format!("T needs m >= 2, got m = {m}")));
    }
    let t2 = InvariantSet::new(2, two_set_base(n))?;
    if n < 4 || m == 2 {
        return expand_set(&t2, m);
    }
    let mut t3 = expand_set(&t2, 3)?;
    t3.insert(Invariant::tr(vec![1, 1, 1])?)?;
    expand_set(&t3, m)
}

/// The five-element separating set for `n = 2, m = 2` containing `σ_2(0,1)`,
/// expanded to `m = 3`. Separating for `char != 2` but not minimal.
pub fn build_counterexample_s3() -> InvariantSet {
    let base = InvariantSet::new(
        2,
        [
            Invariant::tr(vec![1, 0]),
            Invariant::tr(vec![2, 0]),
            Invariant::tr(vec![0, 1]),
            Invariant::new(2, vec![0, 1]),
            Invariant::tr(vec![1, 1]),
        ]
        .into_iter()
        .map(|f| f.expect("static")),
    )
    .expect("static");
    expand_set(&base, 3).expect("3 >= 2")
}

/// `(C(n, m0)·n!/m0!, n - m0)`: `|S_m|/|M_m|` behaves like
/// `constant / m^exponent` as `m → ∞`.
pub fn asymptotic_ratio_constant(n: usize) -> (BigRational, u32) {
    let m0 = m0_of(n);
    let c = BigInt::from(binomial(n as u128, m0 as u128)) * BigInt::from(factorial(n));
    (
        BigRational::new(c, BigInt::from(factorial(m0))),
        (n - m0.min(n)) as u32,
    )
}

/// Textual catalog identifiers: `M:<n>:<m>`, `S:<n>:<m>`, `T:<n>:<m>`, `CX:S3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogId {
    M { n: usize, m: usize },
    S { n: usize, m: usize },
    T { n: usize, m: usize },
    CounterexampleS3,
}

impl CatalogId {
    pub fn n(&self) -> usize {
        match *self {
            CatalogId::M { n, .. } | CatalogId::S { n, .. } | CatalogId::T { n, .. } => n,
            CatalogId::CounterexampleS3 => 2,
        }
    }

    pub fn build(&self) -> Result<InvariantSet> {
        match *self {
            CatalogId::M { n, m } => build_m(n, m),
            CatalogId::S { n, m } => build_s(n, m),
            CatalogId::T { n, m } => build_t(n, m),
            CatalogId::CounterexampleS3 => Ok(build_counterexample_s3()),
        }
    }

    /// Whether the field meets the hypothesis the set was constructed under:
    /// `char = 0 or char > n` for `M`, `S`, `T`; `char != 2` for `CX:S3`.
    pub fn field_hypothesis_holds(&self, spec: FieldSpec) -> bool {
        match self {
            CatalogId::CounterexampleS3 => spec.characteristic() != 2,
            _ => char_ok_for(spec, self.n()),
        }
    }

    pub fn hypothesis_text(&self) -> &'static str {
        match self {
            CatalogId::CounterexampleS3 => "char(K) != 2",
            _ => "char(K) = 0 or char(K) > n",
        }
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "CX:S3" {
            return Ok(CatalogId::CounterexampleS3);
        }
        let bad = || {
            Error::parse(
                0,
                format!("bad catalog id `{s}`; expected M:<n>:<m>, S:<n>:<m>, T:<n>:<m> or CX:S3"),
            )
        };
        let mut parts = s.split(':');
        let (kind, n, m) = (parts.next(), parts.next(), parts.next());
        if parts.next().is_some() {
            return Err(bad());
        }
        let n: usize = n.and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let m: usize = m.and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        if n == 0 || m == 0 {
            return Err(bad());
        }
        match kind {
            Some("M") => Ok(CatalogId::M { n, m }),
            Some("S") => Ok(CatalogId::S { n, m }),
            Some("T") if (2..=4).contains(&n) && m >= 2 => Ok(CatalogId::T { n, m }),
            Some("T") => Err(Error::Catalog(format!(
                "T:{n}:{m} needs n in {{2,3,4}} and m >= 2"
            ))),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::M { n, m } => write!(f, "M:{n}:{m}"),
            CatalogId::S { n, m } => write!(f, "S:{n}:{m}"),
            CatalogId::T { n, m } => write!(f, "T:{n}:{m}"),
            CatalogId::CounterexampleS3 => f.write_str("CX:S3"),
        }
    }
}
