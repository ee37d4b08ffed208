use amoeba_bench::{dense_univariate, line, trinomial};
use amoeba_core::geometry::{approximate_spine, enumerate_components};
use amoeba_core::lopsided::is_lopsided;
use amoeba_core::membership::{certify_outside, CertifyOptions, Mode};
use amoeba_core::raster::{rasterize, RasterMode, RasterSpec};
use amoeba_core::resultant::cyclic_resultant;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn resultants(c: &mut Criterion) {
    let mut g = c.benchmark_group("cyclic_resultant");
    g.sample_size(10);
    let f = line();
    for n in [2u64, 4, 8] {
        g.bench_with_input(BenchmarkId::new("line", n), &n, |b, &n| b.iter(|| cyclic_resultant(black_box(&f), n).unwrap()));
    }
    let u = dense_univariate(8);
    for n in [4u64, 16] {
        g.bench_with_input(BenchmarkId::new("univariate_deg8", n), &n, |b, &n| b.iter(|| cyclic_resultant(black_box(&u), n).unwrap()));
    }
    g.finish();
}

fn lopsidedness(c: &mut Criterion) {
    let res = cyclic_resultant(&line(), 8).unwrap();
    c.bench_function("magnitude_list_and_test/line_res8", |b| {
        b.iter(|| is_lopsided(&res.magnitude_list(black_box(&[-1.0, -1.5])).unwrap(), 0.0).unwrap())
    });
}

fn certification(c: &mut Criterion) {
    let f = line();
    let mut g = c.benchmark_group("certify_outside");
    g.sample_size(10);
    for mode in [Mode::Lopsided, Mode::Superlopsided] {
        let opts = CertifyOptions::with_mode(mode);
        g.bench_function(format!("{mode:?}"), |b| b.iter(|| certify_outside(&f, black_box(&[-0.9, -1.2]), 0.5, &opts).unwrap()));
    }
    g.finish();
}

fn polyhedra(c: &mut Criterion) {
    let f = line();
    let mut g = c.benchmark_group("geometry");
    g.sample_size(10);
    g.bench_function("components/line_n4", |b| b.iter(|| enumerate_components(black_box(&f), 4).unwrap()));
    g.bench_function("spine/line_n4", |b| b.iter(|| approximate_spine(black_box(&f), 4).unwrap()));
    g.finish();
}

fn raster(c: &mut Criterion) {
    let f = trinomial();
    let spec = RasterSpec::new([-2.0, -2.0, 2.0, 2.0], 64, 64, RasterMode::La, 2);
    let mut g = c.benchmark_group("raster");
    g.sample_size(10);
    g.bench_function("trinomial_64x64_n2", |b| b.iter(|| rasterize(black_box(&f), &spec).unwrap()));
    g.finish();
}

criterion_group!(benches, resultants, lopsidedness, certification, polyhedra, raster);
criterion_main!(benches);
