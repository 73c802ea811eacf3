use criterion::{criterion_group, criterion_main, Criterion};
use multisym::{
    build_counterexample_s3, build_t, verify_minimal, verify_separating, DomainSpec, PrimeField,
    Rationals, Sampling, VerifyOptions,
};

fn separating(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_separating");
    group.sample_size(10);
    let f5 = PrimeField::new(5).unwrap();
    let opts = VerifyOptions::default();
    let t23 = build_t(2, 3).unwrap();
    let d = DomainSpec::from_ints(f5, 2, 3, &[0, 1, 2, 3, 4], Sampling::Exhaustive).unwrap();
    group.bench_function("T_2,3 F_5 grid", |b| {
        b.iter(|| verify_separating(&t23, &d, &opts).unwrap())
    });
    let t43 = build_t(4, 3).unwrap();
    let d = DomainSpec::from_ints(Rationals, 4, 3, &[0, 1, 2], Sampling::Exhaustive).unwrap();
    group.bench_function("T_4,3 rational 0..2", |b| {
        b.iter(|| verify_separating(&t43, &d, &opts).unwrap())
    });
    let d = DomainSpec::from_ints(
        f5,
        4,
        3,
        &[0, 1, 2, 3, 4],
        Sampling::Random {
            count: 100_000,
            seed: 1,
        },
    )
    .unwrap();
    group.bench_function("T_4,3 F_5 100k samples", |b| {
        b.iter(|| verify_separating(&t43, &d, &opts).unwrap())
    });
    group.finish();
}

fn minimal(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_minimal");
    group.sample_size(10);
    let f5 = PrimeField::new(5).unwrap();
    let cx = build_counterexample_s3();
    let d = DomainSpec::from_ints(f5, 2, 3, &[0, 1, 2, 3, 4], Sampling::Exhaustive).unwrap();
    group.bench_function("CX:S3 F_5 grid", |b| {
        b.iter(|| verify_minimal(&cx, &d, 1_000_000, &VerifyOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, separating, minimal);
criterion_main!(benches);
