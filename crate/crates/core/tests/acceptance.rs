//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails or exceeds its time limit.

use std::fmt::Debug;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use multisym::catalog::binomial;
use multisym::partitions::{fixes, meet, meet_all, min_block, refines};
use multisym::{
    build_counterexample_s3, build_m, build_s, build_t, eval_invariant, same_orbit, separates,
    size_m, size_s, verify_expansion_theorem, verify_minimal, verify_separating, DomainSpec, Field,
    Invariant, InvariantSet, MinimalOutcome, Permutation, Point, PrimeField, Rationals, Sampling,
    SeparationVerdict, SetPartition, VerifyOptions,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// Debug rendering of every report produced, for the determinism check.
    transcript: String,
}

impl Outcome {
    fn new(failures: Vec<String>, detail: String, transcript: String) -> Self {
        let pass = failures.is_empty();
        let detail = if pass { detail } else { failures.join("; ") };
        Outcome {
            pass,
            detail,
            transcript,
        }
    }
}

fn record(transcript: &mut String, report: &impl Debug) {
    transcript.push_str(&format!("{report:?}\n"));
}

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn grid<F: Field>(field: F, n: usize, m: usize, coords: &[i64]) -> DomainSpec<F> {
    DomainSpec::from_ints(field, n, m, coords, Sampling::Exhaustive).unwrap()
}

fn tr(k: &[u32]) -> Invariant {
    Invariant::tr(k.to_vec()).unwrap()
}

fn columns(cols: [[i64; 4]; 3]) -> Point<BigRational> {
    let q = Rationals;
    Point::from_columns(
        cols.iter()
            .map(|c| c.iter().map(|&v| q.from_i64(v)).collect())
            .collect(),
    )
    .unwrap()
}

/// The pair separated by `tr(1,1,1)` alone among `T_{4,3}`.
fn witness_pair() -> (Point<BigRational>, Point<BigRational>) {
    let a1 = [1, 1, 2, 2];
    let a2 = [1, 2, 1, 2];
    (
        columns([a1, a2, [1, 2, 2, 1]]),
        columns([a1, a2, [2, 1, 1, 2]]),
    )
}

fn same_pair_up_to_order<E: Clone + Ord>(
    got: (&Point<E>, &Point<E>),
    want: (&Point<E>, &Point<E>),
) -> bool {
    let g = (got.0.canonical_form(), got.1.canonical_form());
    let w = (want.0.canonical_form(), want.1.canonical_form());
    g == w || (g.1.clone(), g.0.clone()) == w
}

fn expect_separating<F: Field>(
    label: &str,
    set: &InvariantSet,
    domain: &DomainSpec<F>,
    jobs: usize,
    failures: &mut Vec<String>,
    transcript: &mut String,
) {
    let report = verify_separating(set, domain, &VerifyOptions::with_jobs(jobs)).unwrap();
    if report.verdict != SeparationVerdict::Separating {
        failures.push(format!("{label}: {:?}", report.verdict));
    }
    if Some(report.points_checked) != domain.grid_size() {
        failures.push(format!("{label}: checked {} points", report.points_checked));
    }
    record(transcript, &report);
}

fn criterion_1() -> Outcome {
    let f7 = PrimeField::new(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let (mut pairs, mut same) = (0, 0);
    for n in 2..=5 {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        for m in 1..=3 {
            for i in 0..1000 {
                let random_point = |rng: &mut ChaCha8Rng| {
                    let rows = (0..n)
                        .map(|_| (0..m).map(|_| f7.from_i64(rng.gen_range(0..7))).collect())
                        .collect();
                    Point::from_rows(rows).unwrap()
                };
                let p = random_point(&mut rng);
                let q = match i % 3 {
                    0 => random_point(&mut rng),
                    1 => p.apply_perm(perms.choose(&mut rng).unwrap()).unwrap(),
                    _ => {
                        let mut q = p.apply_perm(perms.choose(&mut rng).unwrap()).unwrap();
                        let (r, c) = (rng.gen_range(0..n), rng.gen_range(0..m));
                        q.set(r, c, f7.from_i64(rng.gen_range(0..7)));
                        q
                    }
                };
                let brute = perms.iter().any(|s| p.apply_perm(s).unwrap() == q);
                let fast = same_orbit(&p, &q).unwrap();
                if brute != fast {
                    failures.push(format!("n={n} m={m}: oracle {fast}, brute force {brute}"));
                }
                pairs += 1;
                same += brute as usize;
            }
        }
    }
    Outcome::new(
        failures,
        format!("{pairs} pairs, {same} in one orbit"),
        String::new(),
    )
}

fn criterion_2(jobs: usize) -> Outcome {
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let all5 = [0, 1, 2, 3, 4];
    for m in [2, 3] {
        let label = format!("T_2,{m} over F_5");
        expect_separating(
            &label,
            &build_t(2, m).unwrap(),
            &grid(f5(), 2, m, &all5),
            jobs,
            &mut failures,
            &mut transcript,
        );
    }
    let d = grid(Rationals, 3, 3, &[0, 1, 2]);
    expect_separating(
        "T_3,3 over Q",
        &build_t(3, 3).unwrap(),
        &d,
        jobs,
        &mut failures,
        &mut transcript,
    );
    Outcome::new(
        failures,
        "T_2,2, T_2,3 (F_5) and T_3,3 (3^9 points) separating".into(),
        transcript,
    )
}

fn criterion_3(jobs: usize) -> Outcome {
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let t43 = build_t(4, 3).unwrap();
    let d = grid(Rationals, 4, 3, &[0, 1, 2]);
    expect_separating("T_4,3", &t43, &d, jobs, &mut failures, &mut transcript);

    let tr111 = tr(&[1, 1, 1]);
    let rest = t43.without(&tr111);
    let report = verify_separating(
        &rest,
        &grid(Rationals, 4, 3, &[1, 2]),
        &VerifyOptions::with_jobs(jobs),
    )
    .unwrap();
    record(&mut transcript, &report);
    let (want_p, want_q) = witness_pair();
    let q = Rationals;
    let values = (
        eval_invariant(&q, &tr111, &want_p).unwrap(),
        eval_invariant(&q, &tr111, &want_q).unwrap(),
    );
    if values != (q.from_i64(13), q.from_i64(14)) {
        failures.push(format!("tr(1,1,1) on the pair: {values:?}"));
    }
    match &report.verdict {
        SeparationVerdict::CounterexampleFound { p, q: other } => {
            if !same_pair_up_to_order((p, other), (&want_p, &want_q)) {
                failures.push(format!("counterexample differs:\n{p}\nvs\n{other}"));
            }
            let got = (
                eval_invariant(&q, &tr111, p).unwrap(),
                eval_invariant(&q, &tr111, other).unwrap(),
            );
            if got != values && (got.1.clone(), got.0.clone()) != values {
                failures.push(format!("tr(1,1,1) on the counterexample: {got:?}"));
            }
        }
        other => failures.push(format!("T_4,3 without tr(1,1,1): {other:?}")),
    }
    Outcome::new(
        failures,
        "T_4,3 separating on 3^12 points; counterexample matches, tr(1,1,1) = 13 vs 14".into(),
        transcript,
    )
}

fn criterion_4(jobs: usize) -> Outcome {
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let t43 = build_t(4, 3).unwrap();
    let budget = 10_668_000;
    let opts = VerifyOptions::with_jobs(jobs);
    let report = verify_minimal(&t43, &grid(f5(), 4, 3, &[0, 1, 2, 3, 4]), budget, &opts).unwrap();
    record(&mut transcript, &report);
    let witnessed = report
        .entries
        .iter()
        .filter(|e| matches!(e.outcome, MinimalOutcome::Witness { .. }))
        .count();
    if report.entries.len() != 25 || witnessed != 25 {
        failures.push(format!(
            "{witnessed} of {} elements witnessed",
            report.entries.len()
        ));
    }
    let most = report
        .entries
        .iter()
        .map(|e| e.evaluated)
        .max()
        .unwrap_or(0);
    for e in &report.entries {
        if let MinimalOutcome::Witness { p, q } = &e.outcome {
            let alone = InvariantSet::new(3, [e.invariant.clone()]).unwrap();
            if !separates(&f5(), &alone, p, q).unwrap()
                || separates(&f5(), &t43.without(&e.invariant), p, q).unwrap()
            {
                failures.push(format!("bad witness for {}", e.invariant));
            }
        }
    }

    let tr111 = tr(&[1, 1, 1]);
    let small = verify_minimal(&t43, &grid(Rationals, 4, 3, &[1, 2]), budget, &opts).unwrap();
    record(&mut transcript, &small);
    let (want_p, want_q) = witness_pair();
    match small.outcome(&tr111) {
        Some(MinimalOutcome::Witness { p, q })
            if same_pair_up_to_order((p, q), (&want_p, &want_q)) => {}
        other => failures.push(format!("tr(1,1,1) on {{1,2}}: {other:?}")),
    }
    Outcome::new(
        failures,
        format!("25/25 witnessed over F_5 (at most {most} representatives per element); tr(1,1,1) witness on {{1,2}} matches"),
        transcript,
    )
}

fn criterion_5(jobs: usize) -> Outcome {
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    let cx = build_counterexample_s3();
    let d = grid(f5(), 2, 3, &[0, 1, 2, 3, 4]);
    expect_separating("CX:S3", &cx, &d, jobs, &mut failures, &mut transcript);
    let s2 = Invariant::new(2, vec![0, 1, 0]).unwrap();
    if !cx.contains(&s2) {
        failures.push("sigma_2(0,1,0) missing from CX:S3".into());
    }
    expect_separating(
        "CX:S3 without sigma_2(0,1,0)",
        &cx.without(&s2),
        &d,
        jobs,
        &mut failures,
        &mut transcript,
    );

    let q = Rationals;
    let (t01, t02, s01) = (
        tr(&[0, 1]),
        tr(&[0, 2]),
        Invariant::new(2, vec![0, 1]).unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=5);
        let rows = (0..n)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        BigRational::new(
                            BigInt::from(rng.gen_range(-50..=50)),
                            BigInt::from(rng.gen_range(1..=20)),
                        )
                    })
                    .collect()
            })
            .collect();
        let p = Point::from_rows(rows).unwrap();
        let lhs = q.mul(&q.from_i64(2), &eval_invariant(&q, &s01, &p).unwrap());
        let t = eval_invariant(&q, &t01, &p).unwrap();
        let rhs = q.sub(&q.mul(&t, &t), &eval_invariant(&q, &t02, &p).unwrap());
        bad += (lhs != rhs) as usize;
    }
    if bad > 0 {
        failures.push(format!("identity failed at {bad} points"));
    }
    Outcome::new(
        failures,
        "both separating on 5^6 points; identity exact at 1000 points".into(),
        transcript,
    )
}

fn expansion_case<F: Field>(
    (n, m0, m): (usize, usize, usize),
    domain: &DomainSpec<F>,
    jobs: usize,
    failures: &mut Vec<String>,
    transcript: &mut String,
) {
    let report =
        verify_expansion_theorem(n, m0, m, domain, &VerifyOptions::with_jobs(jobs)).unwrap();
    if report.verdict != SeparationVerdict::Separating {
        failures.push(format!("n={n} m0={m0} m={m}: {:?}", report.verdict));
    }
    record(transcript, &report);
}

fn criterion_6(jobs: usize) -> Outcome {
    let (mut failures, mut transcript) = (Vec::new(), String::new());
    expansion_case(
        (2, 2, 3),
        &grid(f5(), 2, 3, &[0, 1, 2, 3, 4]),
        jobs,
        &mut failures,
        &mut transcript,
    );
    expansion_case(
        (3, 2, 4),
        &grid(Rationals, 3, 4, &[0, 1, 2]),
        jobs,
        &mut failures,
        &mut transcript,
    );
    expansion_case(
        (4, 3, 4),
        &grid(Rationals, 4, 4, &[0, 1]),
        jobs,
        &mut failures,
        &mut transcript,
    );
    Outcome::new(
        failures,
        "(2,2,3), (3,2,4), (4,3,4) separating".into(),
        transcript,
    )
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=5 {
        for m in 1..=10 {
            let built = build_m(n, m).unwrap().len() as u128;
            let closed = binomial((m + n) as u128, n as u128) - 1;
            if built != closed || size_m(n, m) != closed {
                failures.push(format!(
                    "|M| n={n} m={m}: built {built}, closed form {closed}"
                ));
            }
        }
    }
    for m in 1..=12 {
        let built = build_s(4, m).unwrap().len() as u128;
        let closed = size_m(4, m) - binomial(m as u128, 4);
        if built != closed || size_s(4, m) != built {
            failures.push(format!("|S| m={m}: built {built}, closed form {closed}"));
        }
    }
    let scaled = |m: usize| size_s(4, m) as f64 / size_m(4, m) as f64 * m as f64;
    let devs: Vec<f64> = [50, 100, 200]
        .iter()
        .map(|&m| (scaled(m) - 16.0).abs())
        .collect();
    if devs[2] > 1.6 {
        failures.push(format!(
            "m=200 ratio {:.4} not within 10% of 16",
            scaled(200)
        ));
    }
    if !(devs[0] > devs[1] && devs[1] > devs[2]) {
        failures.push(format!("deviation not decreasing: {devs:?}"));
    }
    Outcome::new(
        failures,
        format!(
            "ratio x m = {:.3}, {:.3}, {:.3} at m = 50, 100, 200",
            scaled(50),
            scaled(100),
            scaled(200)
        ),
        String::new(),
    )
}

/// All set partitions of `[n]` as restricted growth strings.
fn all_partitions(n: usize) -> Vec<SetPartition> {
    fn grow(labels: &mut Vec<usize>, n: usize, out: &mut Vec<SetPartition>) {
        if labels.len() == n {
            out.push(SetPartition::from_labels(labels));
            return;
        }
        let next = labels.iter().max().map_or(0, |&m| m + 1);
        for l in 0..=next {
            labels.push(l);
            grow(labels, n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

fn random_partition(rng: &mut impl Rng, n: usize) -> SetPartition {
    let blocks = rng.gen_range(1..=n);
    SetPartition::from_labels(&(0..n).map(|_| rng.gen_range(0..blocks)).collect::<Vec<_>>())
}

/// Whether some permutation fixing every partition in `prev` moves a block of `a`.
fn stabilizers_not_included(prev: &[SetPartition], a: &SetPartition) -> bool {
    let n = a.n();
    if n <= 6 {
        Permutation::all(n)
            .any(|s| prev.iter().all(|b| fixes(&s, b).unwrap()) && !fixes(&s, a).unwrap())
    } else {
        let acc = meet_all(prev)
            .unwrap()
            .unwrap_or_else(|| SetPartition::whole(n));
        !refines(&acc, a).unwrap()
    }
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    for n in 1..=6 {
        let parts = all_partitions(n);
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let fix: Vec<Vec<bool>> = parts
            .iter()
            .map(|a| perms.iter().map(|s| fixes(s, a).unwrap()).collect())
            .collect();
        for (i, a) in parts.iter().enumerate() {
            for (j, b) in parts.iter().enumerate() {
                let ab = meet(a, b).unwrap();
                let ok = perms
                    .iter()
                    .enumerate()
                    .all(|(k, s)| fixes(s, &ab).unwrap() == (fix[i][k] && fix[j][k]));
                if !ok {
                    failures.push(format!("stabilizer of {a} meet {b}"));
                }
                pairs += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut growth = 0;
    while growth < 500 {
        let n = rng.gen_range(2..=8);
        let (a, b) = (random_partition(&mut rng, n), random_partition(&mut rng, n));
        let refine = refines(&a, &b).unwrap();
        if n <= 6 {
            let inclusion =
                Permutation::all(n).all(|s| !fixes(&s, &a).unwrap() || fixes(&s, &b).unwrap());
            if inclusion != refine {
                failures.push(format!("refinement vs inclusion at {a}, {b}"));
            }
        }
        if !refine {
            if meet(&a, &b).unwrap().block_count() <= a.block_count() {
                failures.push(format!("meet of {a} and {b} does not grow"));
            }
            growth += 1;
        }
    }

    let mut chains = 0;
    let mut attempts = 0;
    while chains < 500 && attempts < 100_000 {
        attempts += 1;
        let n = rng.gen_range(2..=8);
        let r = rng.gen_range(n / 2..=n / 2 + 1).max(1);
        let mut chain: Vec<SetPartition> = Vec::new();
        for _ in 0..r {
            let Some(next) = (0..100)
                .map(|_| random_partition(&mut rng, n))
                .find(|a| stabilizers_not_included(&chain, a))
            else {
                break;
            };
            chain.push(next);
        }
        if chain.len() < r {
            continue;
        }
        if min_block(&meet_all(&chain).unwrap().unwrap()) != 1 {
            failures.push(format!("chain {chain:?} has no singleton block"));
        }
        chains += 1;
    }
    if chains < 500 {
        failures.push(format!("only {chains} valid chains generated"));
    }
    Outcome::new(
        failures,
        format!("{pairs} partition pairs exhaustive; {growth} and {chains} random instances"),
        String::new(),
    )
}

type Rerun = (u32, fn(usize) -> Outcome);

/// Id, name, time limit in seconds, body.
type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Outcome>);

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let runs: [Rerun; 5] = [
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
    ];
    for (id, run) in runs {
        let base = run(1).transcript;
        for jobs in [4, 8] {
            if run(jobs).transcript != base {
                failures.push(format!("criterion {id} differs with {jobs} workers"));
            }
        }
    }
    Outcome::new(
        failures,
        "criteria 2-6 identical for 1, 4 and 8 workers".into(),
        String::new(),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "orbit oracle", 10, Box::new(criterion_1)),
        (
            2,
            "T_2,m and T_3,3 separating",
            30,
            Box::new(|| criterion_2(1)),
        ),
        (
            3,
            "T_4,3 separating, tr(1,1,1) needed",
            300,
            Box::new(|| criterion_3(1)),
        ),
        (
            4,
            "T_4,3 minimality witnesses",
            600,
            Box::new(|| criterion_4(1)),
        ),
        (
            5,
            "expanded five-element set",
            60,
            Box::new(|| criterion_5(1)),
        ),
        (6, "expansion from m0", 600, Box::new(|| criterion_6(1))),
        (7, "counting", 60, Box::new(criterion_7)),
        (8, "partition lemmas", 60, Box::new(criterion_8)),
        (9, "determinism across workers", 3600, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria.iter() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (mut pass, mut detail) = match outcome {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("panicked: {}", panic_message(&e))),
        };
        if elapsed > Duration::from_secs(*limit) {
            pass = false;
            detail = format!("{detail}; exceeded {limit}s");
        }
        failed += !pass as u32;
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} [{name}]: {verdict} ({:.2}s) {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
