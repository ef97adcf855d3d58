use criterion::{black_box, criterion_group, criterion_main, Criterion};

use dihedral_iwasawa::dihedralalgebra::{crossed_mul, nr, random_crossed};
use dihedral_iwasawa::measures::{mahler_expand, r_integrand};
use dihedral_iwasawa::padic::iwasawa_log;
use dihedral_iwasawa::quadfield::{Ideal, RealQuadField};
use dihedral_iwasawa::series::{binom_l_series_int, newton_fit, NodeGrid, Tail};
use dihedral_iwasawa::zetavalues::dedekind_zeta_shintani;
use dihedral_iwasawa::PAdic;
use dihedral_iwasawa_bench::node_values;
use num_bigint::BigInt;
use rand::SeedableRng;

fn padic(c: &mut Criterion) {
    let x = PAdic::from_i64(-3, 256);
    c.bench_function("iwasawa_log 256 bits", |b| b.iter(|| iwasawa_log(black_box(&x)).unwrap()));
    let v = BigInt::from(1_000_003);
    c.bench_function("binom_l_series 30 coeffs", |b| b.iter(|| binom_l_series_int(black_box(&v), -3, 30, 128).unwrap()));
}

fn fit(c: &mut Criterion) {
    let grid = NodeGrid::new(-3, 34, 160).unwrap();
    let vals = node_values(&grid, 34, 160);
    c.bench_function("newton_fit 34 nodes", |b| b.iter(|| newton_fit(&grid, black_box(&vals), 30, 160, Tail::Series).unwrap()));
}

fn zeta(c: &mut Criterion) {
    let field = RealQuadField::from_disc(145).unwrap();
    c.bench_function("shintani zeta_F(-3), d=145", |b| b.iter(|| dedekind_zeta_shintani(black_box(&field), 4)));
}

fn algebra(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let x = random_crossed(&mut rng, 10, 16);
    let y = random_crossed(&mut rng, 10, 16);
    c.bench_function("crossed_mul + nr, N=10", |b| b.iter(|| nr(&crossed_mul(black_box(&x), black_box(&y)))));
}

fn mahler(c: &mut Criterion) {
    let field = RealQuadField::from_disc(145).unwrap();
    let a = Ideal::unit();
    let mut g = c.benchmark_group("mahler");
    g.sample_size(10);
    g.bench_function("expand R integrand, cutoff 32", |b| b.iter(|| mahler_expand(r_integrand(&field, &a, -3, 10, 64), 32).unwrap()));
    g.finish();
}

criterion_group!(benches, padic, fit, zeta, algebra, mahler);
criterion_main!(benches);
