//! Benchmarks for the hot paths: parsing, span handling, corruption,
//! scoring, and tagger training. Run with `cargo bench -p nerlab-bench`.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use nerlab_bench::{bench_corpus, bench_heldout};
use nerlab_core::conll::{parse_conll, serialize_conll, ParseOptions, TagSchemeConfig};
use nerlab_core::corrupt::{cap_labels, cap_sentences, swap_labels};
use nerlab_core::scoring::score;
use nerlab_core::span::{apply_spans, extract_spans};
use nerlab_core::tagger::{TaggerModel, TrainConfig};

fn bench_parse(c: &mut Criterion) {
    let corpus = bench_corpus(1000);
    let bytes = serialize_conll(&corpus);
    let scheme = TagSchemeConfig::default();
    let options = ParseOptions::default();

    let mut group = c.benchmark_group("conll");
    group.throughput(Throughput::Bytes(bytes.len() as u64));
    group.bench_function("parse_1000_sentences", |b| {
        b.iter(|| parse_conll(black_box(&bytes), &scheme, &options).unwrap())
    });
    group.bench_function("serialize_1000_sentences", |b| {
        b.iter(|| serialize_conll(black_box(&corpus)))
    });
    group.finish();
}

fn bench_spans(c: &mut Criterion) {
    let corpus = bench_corpus(1000);
    let index = extract_spans(&corpus).unwrap();

    let mut group = c.benchmark_group("span");
    group.throughput(Throughput::Elements(index.len() as u64));
    group.bench_function("extract_1000_sentences", |b| {
        b.iter(|| extract_spans(black_box(&corpus)).unwrap())
    });
    group.bench_function("apply_1000_sentences", |b| {
        b.iter(|| apply_spans(black_box(&corpus), black_box(&index)).unwrap())
    });
    group.finish();
}

fn bench_corruption(c: &mut Criterion) {
    let corpus = bench_corpus(1000);
    let mut group = c.benchmark_group("corrupt");
    group.bench_function("cap_sentences_half", |b| {
        b.iter(|| cap_sentences(black_box(&corpus), 0.5, 42).unwrap())
    });
    group.bench_function("cap_labels_half", |b| {
        b.iter(|| cap_labels(black_box(&corpus), 0.5, 42).unwrap())
    });
    group.bench_function("swap_labels_half", |b| {
        b.iter(|| swap_labels(black_box(&corpus), 0.5, 42).unwrap())
    });
    group.finish();
}

fn bench_scoring(c: &mut Criterion) {
    let gold = bench_corpus(1000);
    let pred = swap_labels(&gold, 0.2, 7).unwrap();
    c.bench_function("score_1000_sentences", |b| {
        b.iter(|| score(black_box(&gold), black_box(&pred)).unwrap())
    });
}

fn bench_tagger(c: &mut Criterion) {
    let mut group = c.benchmark_group("tagger");
    group.sample_size(10);
    for sentences in [100usize, 400] {
        let corpus = bench_corpus(sentences);
        let cfg = TrainConfig {
            epochs: 5,
            ..TrainConfig::default()
        };
        group.bench_with_input(
            BenchmarkId::new("train_5_epochs", sentences),
            &corpus,
            |b, corpus| b.iter(|| TaggerModel::train(black_box(corpus), &cfg).unwrap()),
        );
    }
    let model = TaggerModel::train(
        &bench_corpus(400),
        &TrainConfig {
            epochs: 5,
            ..TrainConfig::default()
        },
    )
    .unwrap();
    let heldout = bench_heldout(200);
    group.bench_function("predict_200_sentences", |b| {
        b.iter(|| model.predict(black_box(&heldout)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_parse,
    bench_spans,
    bench_corruption,
    bench_scoring,
    bench_tagger
);
criterion_main!(benches);
