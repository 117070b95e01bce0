use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use schurdist::distillation::distill_law;
use schurdist::partitions::{enumerate_partitions, Partition};
use schurdist::schur_weyl::{schur_law, schur_law_via_characters};
use schurdist::symmetric::CharacterMemo;
use schurdist::Limits;
use schurdist_bench::geometric_spectrum;

fn partitions(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_partitions");
    for k in [20usize, 40, 60] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| enumerate_partitions(black_box(k), 4).unwrap())
        });
    }
    g.finish();
}

fn laws(c: &mut Criterion) {
    let lim = Limits::default();
    let mut g = c.benchmark_group("schur_law");
    for (d, k) in [(2usize, 64usize), (3, 32), (4, 16)] {
        let s = geometric_spectrum(d);
        g.bench_with_input(BenchmarkId::new("branching", format!("d{d}k{k}")), &k, |b, &k| {
            b.iter(|| schur_law(&s, black_box(k), &lim).unwrap())
        });
    }
    let s = geometric_spectrum(3);
    g.bench_function("characters/d3k8", |b| b.iter(|| schur_law_via_characters(&s, black_box(8), &lim).unwrap()));
    g.bench_function("distill_law/d3k32", |b| b.iter(|| distill_law(&s, black_box(32), &lim).unwrap()));
    g.finish();
}

fn characters(c: &mut Criterion) {
    let k = 12;
    let parts = enumerate_partitions(k, k).unwrap();
    c.bench_function("character_table/k12", |b| {
        b.iter(|| {
            let mut table = CharacterMemo::new();
            let mut acc = 0i128;
            for lambda in &parts {
                for mu in &parts {
                    acc += table.character(lambda, mu).unwrap();
                }
            }
            black_box(acc)
        })
    });
    let hook = Partition::new(vec![7, 1, 1, 1, 1, 1]).unwrap();
    c.bench_function("character/hook_vs_row", |b| {
        let mut table = CharacterMemo::new();
        b.iter(|| table.character(black_box(&hook), &Partition::row(12)).unwrap())
    });
}

criterion_group!(benches, partitions, laws, characters);
criterion_main!(benches);
