//! Corpus laboratory for BIO-tagged named-entity-recognition data.
//!
//! The crate bundles everything needed to study how annotation quality and
//! corpus size affect a sequence tagger:
//!
//! - [`conll`]: parsing and serialization of whitespace-column CoNLL files
//! - [`span`]: conversion between token-level BIO tags and entity spans
//! - [`corrupt`]: seeded, exactly-counted corruption strategies
//! - [`stats`]: corpus statistics (sentences, tokens, entities, density)
//! - [`scoring`]: entity-level precision/recall/F1 with exact span matching
//! - [`tagger`]: an averaged structured perceptron with Viterbi decoding
//! - [`experiment`]: corruption-grid orchestration and CSV result tables
//! - [`synth`]: deterministic synthetic corpora for benchmarks and tests
//!
//! Every randomized operation takes an explicit 64-bit seed and is driven by
//! the pinned generator in [`rng`], so results are reproducible across
//! platforms and runs.

pub mod conll;
pub mod corrupt;
pub mod experiment;
pub mod rng;
pub mod scoring;
pub mod span;
pub mod stats;
pub mod synth;
pub mod tagger;

pub use conll::{
    parse_conll, serialize_conll, BioPolicy, ConllError, Dataset, ParseOptions, ParsedConll,
    Sentence, Tag, TagSchemeConfig, Token,
};
pub use corrupt::{
    cap_labels, cap_sentences, compose_quantity_quality, count_affected_spans, label_retention,
    swap_labels, CorruptError, CorruptionSpec, Strategy,
};
pub use experiment::{
    aggregate, results_to_csv, run_combined_matrix, run_grid, ExperimentError, ExperimentGrid,
    ExperimentResult, ResultRow, SummaryRow,
};
pub use scoring::{normalize, score, NormalizedScore, ScoreError, ScoreReport, TypeScore};
pub use span::{apply_spans, extract_spans, Span, SpanError, SpanIndex};
pub use stats::{compute_stats, StatsError, StatsReport};
pub use synth::SynthConfig;
pub use tagger::{TaggerError, TaggerModel, TrainConfig};
