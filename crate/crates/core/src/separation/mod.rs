//! Separation predicates and the orbit-exact verification engine.
//!
//! Grid verdicts are relative to the enumerated domain: "separating" means no
//! two points of the grid in distinct orbits share a fingerprint, not a proof
//! over all of `K^{n·m}`.
//!
//! The engine enumerates one representative per orbit (rows sorted in
//! coordinate-index order), evaluates its fingerprint once through a table of
//! row monomials, and weights it by the orbit size. Bucket sizes and
//! `points_checked` therefore count every grid point.

mod grid;
pub mod record;

use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::HashMap;
use std::hash::Hasher;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{build_m, m0_of};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::invariants::{eval_invariant, expand_set, Invariant, InvariantSet};
use crate::orbits::{same_orbit, Point};
use grid::{for_each_rep_starting_at, multiset_count, orbit_size, GridShape, Rep, RowTable};

/// How points of a domain are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every point of `coords^{n·m}`.
    Exhaustive,
    /// `count` uniform points from `coords^{n·m}`, reproducible from `seed`.
    Random { count: u64, seed: u64 },
}

/// A finite set of points of `V^m` over a coordinate list.
#[derive(Clone, Debug)]
pub struct DomainSpec<F: Field> {
    field: F,
    n: usize,
    m: usize,
    coords: Vec<F::Elem>,
    sampling: Sampling,
}

impl<F: Field> DomainSpec<F> {
    pub fn new(
        field: F,
        n: usize,
        m: usize,
        coords: Vec<F::Elem>,
        sampling: Sampling,
    ) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDomain(format!(
                "need n, m >= 1 (got n = {n}, m = {m})"
            )));
        }
        if coords.is_empty() {
            return Err(Error::InvalidDomain("coordinate list is empty".into()));
        }
        let mut sorted = coords.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidDomain(
                "coordinate list has duplicates".into(),
            ));
        }
        GridShape::new(coords.len(), m)?;
        Ok(DomainSpec {
            field,
            n,
            m,
            coords,
            sampling,
        })
    }

    pub fn grid(field: F, n: usize, m: usize, coords: Vec<F::Elem>) -> Result<Self> {
        Self::new(field, n, m, coords, Sampling::Exhaustive)
    }

    pub fn random(
        field: F,
        n: usize,
        m: usize,
        coords: Vec<F::Elem>,
        count: u64,
        seed: u64,
    ) -> Result<Self> {
        Self::new(field, n, m, coords, Sampling::Random { count, seed })
    }

    /// Integer coordinates mapped into the field; duplicates after reduction
    /// are rejected.
    pub fn from_ints(
        field: F,
        n: usize,
        m: usize,
        coords: &[i64],
        sampling: Sampling,
    ) -> Result<Self> {
        let elems = coords.iter().map(|&c| field.from_i64(c)).collect();
        Self::new(field, n, m, elems, sampling)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    /// `|coords|^{n·m}`, if it fits.
    pub fn grid_size(&self) -> Option<u128> {
        (self.coords.len() as u128).checked_pow((self.n * self.m) as u32)
    }

    /// One-line description used in report records.
    pub fn describe(&self) -> String {
        let coords: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        match self.sampling {
            Sampling::Exhaustive => format!("grid coords={}", coords.join(",")),
            Sampling::Random { count, seed } => {
                format!(
                    "random count={count} seed={seed} coords={}",
                    coords.join(",")
                )
            }
        }
    }
}

/// Worker count and memory guard for verification runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub jobs: usize,
    /// Maximum number of distinct fingerprints held at once.
    pub max_buckets: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 1,
            max_buckets: 50_000_000,
        }
    }
}

impl VerifyOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        VerifyOptions {
            jobs,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationVerdict<E> {
    Separating,
    CounterexampleFound { p: Point<E>, q: Point<E> },
    InconclusiveSample,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport<E> {
    pub verdict: SeparationVerdict<E>,
    pub points_checked: u128,
    pub buckets: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalOutcome<E> {
    /// `f(p) != f(q)` while every other element agrees on `p` and `q`.
    Witness {
        p: Point<E>,
        q: Point<E>,
    },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalEntry<E> {
    pub invariant: Invariant,
    pub outcome: MinimalOutcome<E>,
    /// Orbit representatives evaluated while searching.
    pub evaluated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport<E> {
    pub entries: Vec<MinimalEntry<E>>,
}

impl<E> MinimalityReport<E> {
    pub fn all_witnessed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.outcome, MinimalOutcome::Witness { .. }))
    }

    pub fn outcome(&self, f: &Invariant) -> Option<&MinimalOutcome<E>> {
        self.entries
            .iter()
            .find(|e| &e.invariant == f)
            .map(|e| &e.outcome)
    }
}

/// Values of the elements of `set` at `p`, in set order.
pub fn fingerprint<F: Field>(
    field: &F,
    set: &InvariantSet,
    p: &Point<F::Elem>,
) -> Result<Vec<F::Elem>> {
    set.iter().map(|f| eval_invariant(field, f, p)).collect()
}

/// Some element of `set` takes different values at `p` and `q`.
pub fn separates<F: Field>(
    field: &F,
    set: &InvariantSet,
    p: &Point<F::Elem>,
    q: &Point<F::Elem>,
) -> Result<bool> {
    if p.n() != q.n() || p.m() != q.m() {
        return Err(Error::dim("points of different shape"));
    }
    for f in set {
        if eval_invariant(field, f, p)? != eval_invariant(field, f, q)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_compatible<F: Field>(set: &InvariantSet, domain: &DomainSpec<F>) -> Result<()> {
    if set.m() != domain.m {
        return Err(Error::dim(format!(
            "set lives on m = {}, domain has m = {}",
            set.m(),
            domain.m
        )));
    }
    set.check_degrees(domain.n)
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(work))
}

type Pair<E> = (Point<E>, Point<E>);

/// Enumeration-order key: `(sample index, representative)`. Grid runs use
/// index 0 throughout so the representative alone decides.
type Seen = (u64, Rep);

struct Bucket {
    size: u128,
    first: Seen,
    /// Least entry whose orbit differs from `first`'s.
    other: Option<Seen>,
}

impl Bucket {
    fn absorb(&mut self, seen: Seen, size: u128) {
        self.size += size;
        self.absorb_entry(seen);
    }

    fn absorb_entry(&mut self, seen: Seen) {
        if seen < self.first {
            let old = std::mem::replace(&mut self.first, seen);
            if old.1 != self.first.1 {
                self.other = Some(old);
            }
        } else if seen.1 != self.first.1 && self.other.as_ref().is_none_or(|o| seen < *o) {
            self.other = Some(seen);
        }
    }

    fn merge(&mut self, other: Bucket) {
        self.size += other.size;
        self.absorb_entry(other.first);
        if let Some(o) = other.other {
            self.absorb_entry(o);
        }
    }
}

struct Accumulator {
    buckets: HashMap<Box<[u8]>, Bucket>,
    limit: usize,
    overflow: bool,
}

impl Accumulator {
    fn new(limit: usize) -> Self {
        Accumulator {
            buckets: HashMap::new(),
            limit,
            overflow: false,
        }
    }

    /// Returns `false` once the bucket limit is exceeded.
    fn add(&mut self, key: &[u8], seen: Seen, size: u128) -> bool {
        if let Some(b) = self.buckets.get_mut(key) {
            b.absorb(seen, size);
        } else {
            self.buckets.insert(
                key.into(),
                Bucket {
                    size,
                    first: seen,
                    other: None,
                },
            );
            if self.buckets.len() > self.limit {
                self.overflow = true;
            }
        }
        !self.overflow
    }

    fn merge(mut self, mut other: Accumulator) -> Accumulator {
        if other.buckets.len() > self.buckets.len() {
            std::mem::swap(&mut self, &mut other);
        }
        self.overflow |= other.overflow;
        for (k, b) in other.buckets {
            match self.buckets.entry(k) {
                Entry::Occupied(mut e) => e.get_mut().merge(b),
                Entry::Vacant(e) => {
                    e.insert(b);
                }
            }
        }
        if self.buckets.len() > self.limit {
            self.overflow = true;
        }
        self
    }
}

struct Evaluator<'a, F: Field> {
    field: &'a F,
    table: &'a RowTable<F::Elem>,
    values: Vec<F::Elem>,
    scratch: Vec<F::Elem>,
    bytes: Vec<u8>,
}

impl<'a, F: Field> Evaluator<'a, F> {
    fn new(field: &'a F, table: &'a RowTable<F::Elem>) -> Self {
        Evaluator {
            field,
            table,
            values: Vec::new(),
            scratch: Vec::new(),
            bytes: Vec::new(),
        }
    }

    /// Encodes the fingerprint of `rep`, leaving out element `skip` if given.
    fn encode(&mut self, rep: &[u32], skip: Option<usize>) -> &[u8] {
        self.table
            .fingerprint(self.field, rep, &mut self.values, &mut self.scratch);
        self.bytes.clear();
        for (j, v) in self.values.iter().enumerate() {
            if Some(j) != skip {
                self.field.encode(v, &mut self.bytes);
            }
        }
        &self.bytes
    }
}

fn sample_reps(shape: GridShape, n: usize, count: u64, seed: u64) -> Vec<Rep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut rep: Rep = (0..n).map(|_| rng.gen_range(0..shape.rows)).collect();
            rep.sort_unstable();
            rep
        })
        .collect()
}

const SAMPLE_CHUNK: usize = 4096;

/// Checks whether `set` separates all orbits met in `domain`.
///
/// Grid runs report the lexicographically least counterexample pair in point
/// enumeration order; sampled runs report the pair seen earliest. The report
/// does not depend on `opts.jobs`.
pub fn verify_separating<F: Field>(
    set: &InvariantSet,
    domain: &DomainSpec<F>,
    opts: &VerifyOptions,
) -> Result<SeparationReport<F::Elem>> {
    check_compatible(set, domain)?;
    let field = &domain.field;
    let n = domain.n;
    let shape = GridShape::new(domain.coords.len(), domain.m)?;
    let table = RowTable::new(field, set, shape, &domain.coords);
    let limit = opts.max_buckets;

    let acc = match domain.sampling {
        Sampling::Exhaustive => {
            let rows: Vec<u32> = (0..shape.rows).collect();
            with_pool(opts.jobs, || {
                (0..rows.len())
                    .into_par_iter()
                    .fold(
                        || (Accumulator::new(limit), Evaluator::new(field, &table)),
                        |(mut acc, mut ev), first| {
                            if !acc.overflow {
                                for_each_rep_starting_at(&rows, n, first, |rep| {
                                    let key = ev.encode(rep, None);
                                    acc.add(key, (0, rep.clone()), orbit_size(rep))
                                });
                            }
                            (acc, ev)
                        },
                    )
                    .map(|(acc, _)| acc)
                    .reduce(|| Accumulator::new(limit), Accumulator::merge)
            })?
        }
        Sampling::Random { count, seed } => {
            let samples = sample_reps(shape, n, count, seed);
            with_pool(opts.jobs, || {
                samples
                    .par_chunks(SAMPLE_CHUNK)
                    .enumerate()
                    .fold(
                        || (Accumulator::new(limit), Evaluator::new(field, &table)),
                        |(mut acc, mut ev), (chunk, reps)| {
                            for (i, rep) in reps.iter().enumerate() {
                                if acc.overflow {
                                    break;
                                }
                                let index = (chunk * SAMPLE_CHUNK + i) as u64;
                                let key = ev.encode(rep, None);
                                acc.add(key, (index, rep.clone()), 1);
                            }
                            (acc, ev)
                        },
                    )
                    .map(|(acc, _)| acc)
                    .reduce(|| Accumulator::new(limit), Accumulator::merge)
            })?
        }
    };

    if acc.overflow {
        return Err(Error::MemoryBudget {
            buckets: acc.buckets.len(),
            limit,
        });
    }
    let points_checked: u128 = acc.buckets.values().map(|b| b.size).sum();
    let buckets = acc.buckets.len() as u64;
    let least = acc
        .buckets
        .into_values()
        .filter_map(|b| b.other.map(|o| (b.first, o)))
        .min();

    let verdict = match least {
        Some(((_, p), (_, q))) => {
            let p = shape.point(&domain.coords, &p);
            let q = shape.point(&domain.coords, &q);
            // Independent re-check through direct evaluation.
            if same_orbit(&p, &q)? || separates(field, set, &p, &q)? {
                return Err(Error::Precondition(format!(
                    "unsound counterexample:\n{p:?}\n{q:?}"
                )));
            }
            SeparationVerdict::CounterexampleFound { p, q }
        }
        None => match domain.sampling {
            Sampling::Exhaustive => SeparationVerdict::Separating,
            Sampling::Random { .. } => SeparationVerdict::InconclusiveSample,
        },
    };
    Ok(SeparationReport {
        verdict,
        points_checked,
        buckets,
    })
}

fn digest(bytes: &[u8]) -> u128 {
    let mut a = DefaultHasher::new();
    a.write(bytes);
    let mut b = DefaultHasher::new();
    b.write_u8(0xa5);
    b.write(bytes);
    ((a.finish() as u128) << 64) | b.finish() as u128
}

struct WitnessSearch<'a, F: Field> {
    eval: Evaluator<'a, F>,
    set: &'a InvariantSet,
    shape: GridShape,
    coords: &'a [F::Elem],
    target: usize,
    seen: HashMap<u128, (Rep, F::Elem)>,
    evaluated: u64,
    found: Option<Pair<F::Elem>>,
}

impl<'a, F: Field> WitnessSearch<'a, F> {
    /// Returns `false` once a witness is found.
    fn offer(&mut self, rep: &Rep) -> bool {
        self.evaluated += 1;
        let key = digest(self.eval.encode(rep, Some(self.target)));
        let value = self.eval.values[self.target].clone();
        let earlier = match self.seen.entry(key) {
            Entry::Vacant(e) => {
                e.insert((rep.clone(), value));
                return true;
            }
            Entry::Occupied(e) if e.get().1 != value => e.get().0.clone(),
            Entry::Occupied(_) => return true,
        };
        let p = self.shape.point(self.coords, &earlier);
        let q = self.shape.point(self.coords, rep);
        if self.confirm(&p, &q) {
            self.found = Some((p, q));
            return false;
        }
        true
    }

    /// Exact check of a candidate; rejects digest collisions.
    fn confirm(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> bool {
        let field = self.eval.field;
        self.set.iter().enumerate().all(|(j, f)| {
            let differ = eval_invariant(field, f, p).ok() != eval_invariant(field, f, q).ok();
            differ == (j == self.target)
        })
    }
}

/// For each element `f`, looks for a pair separated by `f` but by no other
/// element. Grids are searched on growing coordinate prefixes while they fit
/// in `budget` (orbit representatives per element), then by seeded sampling.
/// A full set of witnesses certifies minimality relative to the domain only.
pub fn verify_minimal<F: Field>(
    set: &InvariantSet,
    domain: &DomainSpec<F>,
    budget: u64,
    opts: &VerifyOptions,
) -> Result<MinimalityReport<F::Elem>> {
    check_compatible(set, domain)?;
    let field = &domain.field;
    let shape = GridShape::new(domain.coords.len(), domain.m)?;
    let table = RowTable::new(field, set, shape, &domain.coords);
    let max_digit: Vec<u32> = (0..shape.rows).map(|r| shape.max_digit(r)).collect();
    let elements: Vec<Invariant> = set.iter().cloned().collect();

    let search = |target: usize| -> MinimalEntry<F::Elem> {
        let mut s = WitnessSearch {
            eval: Evaluator::new(field, &table),
            set,
            shape,
            coords: &domain.coords,
            target,
            seen: HashMap::new(),
            evaluated: 0,
            found: None,
        };
        match domain.sampling {
            Sampling::Exhaustive => {
                for k in 1..=shape.c {
                    let reps_in_prefix = multiset_count((k as u128).pow(domain.m as u32), domain.n);
                    if reps_in_prefix > budget as u128 {
                        let rest = budget - s.evaluated;
                        for rep in sample_reps(shape, domain.n, rest, 0) {
                            if !s.offer(&rep) {
                                break;
                            }
                        }
                        break;
                    }
                    let rows: Vec<u32> = (0..shape.rows)
                        .filter(|&r| max_digit[r as usize] < k)
                        .collect();
                    for first in 0..rows.len() {
                        for_each_rep_starting_at(&rows, domain.n, first, |rep| {
                            // Representatives of the previous prefix were already offered.
                            if k > 1 && rep.iter().all(|&r| max_digit[r as usize] + 1 < k) {
                                return true;
                            }
                            s.offer(rep)
                        });
                        if s.found.is_some() {
                            break;
                        }
                    }
                    if s.found.is_some() {
                        break;
                    }
                }
            }
            Sampling::Random { count, seed } => {
                for rep in sample_reps(shape, domain.n, count.min(budget), seed) {
                    if !s.offer(&rep) {
                        break;
                    }
                }
            }
        }
        let outcome = match s.found {
            Some((p, q)) => MinimalOutcome::Witness { p, q },
            None => MinimalOutcome::Unknown,
        };
        MinimalEntry {
            invariant: elements[target].clone(),
            outcome,
            evaluated: s.evaluated,
        }
    };

    let entries = with_pool(opts.jobs, || {
        (0..elements.len()).into_par_iter().map(search).collect()
    })?;
    Ok(MinimalityReport { entries })
}

/// Expands `M_{m0}` to `m` variable sets and checks separation on `domain`.
/// Requires `m0 >= ⌊n/2⌋ + 1` and `m >= m0`.
pub fn verify_expansion_theorem<F: Field>(
    n: usize,
    m0: usize,
    m: usize,
    domain: &DomainSpec<F>,
    opts: &VerifyOptions,
) -> Result<SeparationReport<F::Elem>> {
    if m0 < m0_of(n) {
        return Err(Error::Precondition(format!(
            "m0 = {m0} is below floor(n/2) + 1 = {}",
            m0_of(n)
        )));
    }
    if m < m0 {
        return Err(Error::Precondition(format!("m = {m} is below m0 = {m0}")));
    }
    if domain.n != n || domain.m != m {
        return Err(Error::dim(format!(
            "domain is {}x{}, expected {n}x{m}",
            domain.n, domain.m
        )));
    }
    let set = expand_set(&build_m(n, m0)?, m)?;
    verify_separating(&set, domain, opts)
}
