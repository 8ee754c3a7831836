use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cdga_core::corpus;
use cdga_core::{
    chevalley_eilenberg, e0_of_space, monomial_basis, poincare_structure, untwist_over_circle,
    CohomologyRing, Polynomial, Scalar,
};

fn dense_poly(gens: &cdga_core::Generators, degree: u32) -> Polynomial {
    let mut p = Polynomial::zero();
    for (i, m) in monomial_basis(gens, degree, None, None)
        .into_iter()
        .enumerate()
    {
        p.add_term(Scalar::from_integer(((i % 5) as i64 - 2).into()), m);
    }
    p
}

fn bench_multiply(c: &mut Criterion) {
    let gens = cdga_core::Generators::new(vec![("x1", 1), ("x2", 1), ("a", 2), ("b", 2), ("y", 3)])
        .unwrap();
    let p = dense_poly(&gens, 4);
    let q = dense_poly(&gens, 5);
    c.bench_function("multiply_dense_deg4_deg5", |bench| {
        bench.iter(|| black_box(p.mul(&gens, &q).unwrap()))
    });
}

fn bench_cohomology(c: &mut Criterion) {
    let kt = corpus::kt_model();
    c.bench_function("cohomology_kt_deg4", |bench| {
        bench.iter(|| black_box(CohomologyRing::compute(&kt, 4).unwrap()))
    });
    let total = corpus::x_bundle_model().total().clone();
    c.bench_function("cohomology_x_bundle_deg6", |bench| {
        bench.iter(|| black_box(CohomologyRing::compute(&total, 6).unwrap()))
    });
}

fn bench_ce_filiform(c: &mut Criterion) {
    let l = corpus::lie_filiform6();
    c.bench_function("ce_and_cohomology_filiform6", |bench| {
        bench.iter(|| {
            let model = chevalley_eilenberg(&l).unwrap();
            black_box(CohomologyRing::compute(&model, 6).unwrap())
        })
    });
}

fn bench_e0_scan(c: &mut Criterion) {
    let total = corpus::x_bundle_model().total().clone();
    let h = CohomologyRing::compute(&total, 6).unwrap();
    poincare_structure(&h, 6).unwrap().ok().unwrap();
    c.bench_function("e0_scan_x_bundle", |bench| {
        bench.iter(|| black_box(e0_of_space(&total, &h, true).unwrap()))
    });
}

fn bench_untwist(c: &mut Criterion) {
    let m = corpus::s1_s2xs4_twisted();
    c.bench_function("untwist_s1_s2xs4", |bench| {
        bench.iter(|| black_box(untwist_over_circle(&m).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_multiply,
    bench_cohomology,
    bench_ce_filiform,
    bench_e0_scan,
    bench_untwist
);
criterion_main!(benches);
