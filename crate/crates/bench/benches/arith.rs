use criterion::{black_box, criterion_group, criterion_main, Criterion};

use dioph_bench::{cbrt2_pair, element, field, mordell};
use dioph_core::dioph::{emit_nonzero, scalarize};
use dioph_core::ec::approximate;
use dioph_core::forcing::compute_n;
use dioph_core::ideal::{factor, nonzero_witness, num_den, FieldExtension, Ideal};

fn ideals(c: &mut Criterion) {
    let (a, b) = cbrt2_pair();
    c.bench_function("cbrt2 ideal mul", |x| x.iter(|| black_box(&a).mul(black_box(&b)).unwrap()));
    c.bench_function("cbrt2 ideal intersect", |x| x.iter(|| black_box(&a).intersect(black_box(&b)).unwrap()));
    c.bench_function("cbrt2 factor", |x| x.iter(|| factor(black_box(&a)).unwrap()));
    let f = field("sqrt5");
    let q = element(&f, &[3, 7]).div(&element(&f, &[10, -4])).unwrap();
    c.bench_function("sqrt5 num_den", |x| x.iter(|| num_den(black_box(&q)).unwrap()));
}

fn lemmas(c: &mut Criterion) {
    let g = field("gauss");
    let a = element(&g, &[12, 18]);
    c.bench_function("gauss nonzero witness", |x| x.iter(|| nonzero_witness(black_box(&a)).unwrap()));
    c.bench_function("compute_n ell=4", |x| x.iter(|| compute_n(black_box(4)).unwrap()));
    let sys = emit_nonzero(&FieldExtension::trivial(&field("cbrt2")));
    c.bench_function("scalarize nonzero over cbrt2", |x| x.iter(|| scalarize(black_box(&sys)).unwrap()));
}

fn curves(c: &mut Criterion) {
    let data = mordell();
    let m = Ideal::from_int(data.field(), 35).unwrap();
    let mut g = c.benchmark_group("curve");
    g.sample_size(10);
    g.bench_function("16P", |x| x.iter(|| data.curve.mul_i64(16, black_box(&data.generator))));
    g.bench_function("approximate k=2 mod 35", |x| x.iter(|| approximate(&data, 2, black_box(&m), 100_000).unwrap()));
    g.finish();
}

criterion_group!(benches, ideals, lemmas, curves);
criterion_main!(benches);
