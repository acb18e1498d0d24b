use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tiltcert_core::rational::{int, rat};
use tiltcert_core::{factor_real, polya_exponent, positive_root_count, separate, tilt, Poly};

fn poly_ops(c: &mut Criterion) {
    let p = Poly::from_i64s(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5]);
    let q = Poly::from_i64s(&[2, 7, 1, 8, 2, 8, 1, 8, 2, 8]);
    c.bench_function("mul deg 10 x 9", |b| b.iter(|| black_box(&p).mul(black_box(&q))));
    c.bench_function("tilt deg 10", |b| b.iter(|| tilt(black_box(&p), &rat(2, 3)).unwrap()));
}

fn positivity(c: &mut Criterion) {
    let p = Poly::from_i64s(&[1, -3, 5, -2, 4, -1, 2, 1]);
    c.bench_function("positive roots deg 7", |b| {
        b.iter(|| positive_root_count(black_box(&p)).unwrap())
    });
    let q = Poly::new(vec![int(1), rat(-19, 10), int(1)]);
    c.bench_function("polya exponent near boundary", |b| {
        b.iter(|| polya_exponent(black_box(&q), &int(1), 200).unwrap())
    });
}

fn heavier(c: &mut Criterion) {
    let p = Poly::from_i64s(&[1, 0, 1]).normalize().unwrap();
    let pp = Poly::from_i64s(&[1, 2, 1]).normalize().unwrap();
    c.bench_function("separate (x^2+1) vs (x+1)^2", |b| {
        b.iter(|| separate(black_box(&p), black_box(&pp)).unwrap())
    });
    let f = Poly::from_i64s(&[2, 1, 3, -1, 4, 1, 1]);
    c.bench_function("factor_real deg 6", |b| {
        b.iter(|| factor_real(black_box(&f), 1e-9).unwrap())
    });
}

criterion_group!(benches, poly_ops, positivity, heavier);
criterion_main!(benches);
