use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raag_bench::graphs;
use raag_core::{ArtinMonoid, Gen};

fn normal_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("normal_form");
    for (label, g) in graphs() {
        let m = ArtinMonoid::new(g);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let words: Vec<Vec<Gen>> =
            (0..64).map(|_| (0..32).map(|_| rng.gen_range(0..m.rank() as Gen)).collect()).collect();
        group.bench_function(label, |b| {
            b.iter(|| {
                for w in &words {
                    black_box(m.normal_form(w).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn join(c: &mut Criterion) {
    let mut group = c.benchmark_group("join_ball4");
    for (label, g) in graphs() {
        let m = ArtinMonoid::new(g);
        let ball = m.enumerate(4);
        group.bench_function(label, |b| {
            b.iter(|| {
                for x in ball.iter().step_by(7) {
                    for y in ball.iter().step_by(11) {
                        black_box(m.join(x, y));
                    }
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, normal_form, join);
criterion_main!(benches);
