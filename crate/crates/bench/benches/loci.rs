use criterion::{criterion_group, criterion_main, Criterion};

use critloc::fixtures::{three_view_setup, two_view_setup};
use critloc::geometry::{conjugate_point, nesting_check, residual_ideal, Direction};
use critloc::locus::{critical_ideal, unified_ideal};
use critloc::{Ideal, ProjectivePoint, Side, DEFAULT_PRIME, Q};

fn groebner(c: &mut Criterion) {
    let three = three_view_setup();
    let modular = three.reduce_mod(DEFAULT_PRIME).unwrap();
    c.bench_function("groebner X3 over Q", |b| {
        b.iter(|| {
            let i = critical_ideal(&three, Side::X);
            i.groebner().len()
        })
    });
    c.bench_function("groebner X3 over GF(p)", |b| {
        b.iter(|| {
            let i = critical_ideal(&modular, Side::X);
            i.groebner().len()
        })
    });
    c.bench_function("unified ideal, two views", |b| {
        let two = two_view_setup();
        b.iter(|| {
            let u: Ideal<Q> = unified_ideal(&two);
            u.groebner().len()
        })
    });
}

fn geometry(c: &mut Criterion) {
    let three = three_view_setup();
    c.bench_function("residual X curve (saturation)", |b| b.iter(|| residual_ideal(&three, Side::X, 2).unwrap()));
    c.bench_function("nesting {1,2}", |b| b.iter(|| nesting_check(&three, &[0, 1]).unwrap().verdict));
    let a = ProjectivePoint::from_i64(&[1, 0, 0, 0], &()).unwrap();
    c.bench_function("conjugate of A", |b| b.iter(|| conjugate_point(&three, &a, Direction::Forward).unwrap()));
}

criterion_group!(benches, groebner, geometry);
criterion_main!(benches);
