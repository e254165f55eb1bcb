use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prymkit::cover::{GluedTower, SignedTower};
use prymkit::delpezzo;
use prymkit::f2::fano;
use prymkit::instances::{random_bigonal_instance, random_cover_with_group, random_etale_tower, random_rational_cover};
use prymkit::polygonal::{bigonal, direct_image, tetragonal, trigonal_forward, trigonal_inverse};
use prymkit::weyl;

fn polygonal(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let big = random_bigonal_instance(&mut rng, 1, 6);
    let tri = GluedTower::smooth(random_etale_tower(&mut rng, 3, 8));
    let x = random_rational_cover(&mut rng, 4, 8, true);
    let tet = GluedTower::smooth(random_etale_tower(&mut rng, 4, 7));
    let s4 = random_cover_with_group(&mut rng, 4, 5, 24);
    c.bench_function("bigonal", |b| b.iter(|| bigonal(black_box(&big)).unwrap()));
    c.bench_function("trigonal_forward", |b| b.iter(|| trigonal_forward(black_box(&tri)).unwrap()));
    c.bench_function("trigonal_inverse", |b| b.iter(|| trigonal_inverse(black_box(&x)).unwrap()));
    c.bench_function("tetragonal", |b| b.iter(|| tetragonal(black_box(&tet)).unwrap()));
    c.bench_function("direct_image_split_s4", |b| {
        b.iter(|| direct_image(&SignedTower::split(black_box(&s4))).unwrap())
    });
}

fn lattices(c: &mut Criterion) {
    c.bench_function("lines_r6", |b| b.iter(|| delpezzo::lines(black_box(6)).unwrap()));
    c.bench_function("double_sixes", |b| b.iter(delpezzo::double_sixes));
    c.bench_function("fano_solve", |b| b.iter(|| fano::fano_solve(black_box(true))));
    c.bench_function("wd4_lattice", |b| b.iter(weyl::wd4_lattice));
}

criterion_group!(benches, polygonal, lattices);
criterion_main!(benches);
