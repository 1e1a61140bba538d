use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use kamp::sequent::{eliminate_cuts, prove};
use kamp::{decide, Dialect, Mode};
use kamp_bench::{cut_derivations, ka, sequent, FORMULAS, SEQUENTS};

fn bench_decide(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide");
    for (name, text) in FORMULAS {
        let f = ka(text);
        g.bench_function(name, |b| b.iter(|| decide(black_box(&f), Dialect::KA, Mode::Serial).unwrap()));
    }
    g.finish();
}

fn bench_prove(c: &mut Criterion) {
    let mut g = c.benchmark_group("prove");
    for (name, text) in SEQUENTS {
        let s = sequent(text);
        g.bench_function(name, |b| b.iter(|| prove(black_box(&s)).unwrap()));
    }
    g.finish();
}

fn bench_cut_elim(c: &mut Criterion) {
    let ds = cut_derivations(20);
    c.bench_function("eliminate_cuts/batch20", |b| {
        b.iter(|| {
            for d in &ds {
                black_box(eliminate_cuts(d).unwrap());
            }
        })
    });
}

criterion_group!(benches, bench_decide, bench_prove, bench_cut_elim);
criterion_main!(benches);
