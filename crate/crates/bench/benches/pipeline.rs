use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use vren_bench::corpus;
use vren_core::features::{build_dataset, TaskKind, WindowOptions};
use vren_core::notation::{lint_source, parse_corpus, serialize_corpus};
use vren_core::predictor::{rally_context, train_binary, what_if, TrainConfig};
use vren_core::stats::attack_table;
use vren_core::synth::{generate_corpus, GeneratorProfile};
use vren_core::Team;

fn notation(c: &mut Criterion) {
    let matches = corpus(20, 50);
    let text = serialize_corpus(&matches).unwrap();
    let mut g = c.benchmark_group("notation");
    g.throughput(Throughput::Bytes(text.len() as u64));
    g.bench_function("parse", |b| b.iter(|| parse_corpus(black_box(&text)).unwrap()));
    g.bench_function("lint", |b| b.iter(|| lint_source(black_box(&text))));
    g.bench_function("serialize", |b| b.iter(|| serialize_corpus(black_box(&matches)).unwrap()));
    g.finish();
}

fn stats(c: &mut Criterion) {
    let matches = corpus(20, 50);
    c.bench_function("stats/attack_table", |b| b.iter(|| attack_table(black_box(&matches), Team::A).unwrap()));
}

fn generator(c: &mut Criterion) {
    let profile = GeneratorProfile::default();
    let mut g = c.benchmark_group("generate");
    g.throughput(Throughput::Elements(1000));
    g.bench_function("1000_rallies", |b| b.iter(|| generate_corpus(&profile, 10, 100, black_box(1)).unwrap()));
    g.finish();
}

fn learning(c: &mut Criterion) {
    let matches = corpus(10, 50);
    let opts = WindowOptions::default();
    c.bench_function("features/rally_winner", |b| {
        b.iter(|| build_dataset(black_box(&matches), TaskKind::RallyWinner, opts).unwrap())
    });
    let fm = build_dataset(&matches, TaskKind::RallyWinner, opts).unwrap();
    let cfg = TrainConfig {
        epochs: 10,
        ..TrainConfig::default()
    };
    c.bench_function("train/rally_winner_10_epochs", |b| {
        b.iter(|| train_binary(black_box(&fm), cfg).unwrap())
    });
    let model = train_binary(&fm, cfg).unwrap();
    let m = &matches[0];
    let idx = m.rallies.iter().position(|r| r.rounds.len() >= 2).unwrap_or(0);
    let ctx = rally_context(m, idx);
    c.bench_function("whatif/set_quick", |b| {
        b.iter(|| what_if(&model, &ctx, &m.rallies[idx], 0, "set", black_box("quick")))
    });
}

criterion_group!(benches, notation, stats, generator, learning);
criterion_main!(benches);
