//! Seeded corruption strategies over BIO-tagged datasets.
//!
//! Three strategies, each controlled by one global fraction:
//!
//! - [`cap_sentences`]: keep a random fraction of sentences (data quantity)
//! - [`cap_labels`]: erase a random fraction of entity spans to `O` (missed
//!   annotations)
//! - [`swap_labels`]: relabel a random fraction of spans with a wrong type
//!   (annotator mistakes)
//!
//! Selection is global across the whole dataset, the atomic unit is the
//! entity span, and counts are exact: a fraction `f` over `n` candidates
//! touches `floor(f*n + 0.5)` of them. Token text is never modified.

use std::fmt;

use thiserror::Error;

use crate::conll::Dataset;
use crate::rng::{Pcg32, SplitMix64};
use crate::span::{apply_spans, extract_spans, SpanError, SpanIndex};

#[derive(Debug, Error)]
pub enum CorruptError {
    #[error("dataset has no sentences")]
    EmptyDataset,
    #[error("label swapping requires at least 2 entity types, scheme has {0}")]
    DegenerateScheme(usize),
    #[error("original dataset has no entities but reduced dataset has {0}")]
    EmptyOriginalWithNonemptyReduced(usize),
    #[error(transparent)]
    Span(#[from] SpanError),
}

/// Which corruption to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    CapSentences,
    CapLabels,
    SwapLabels,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::CapSentences => "cap-sentences",
            Strategy::CapLabels => "cap-labels",
            Strategy::SwapLabels => "swap-labels",
        }
    }

    /// Stable id used when deriving per-cell seeds.
    pub fn id(self) -> u64 {
        match self {
            Strategy::CapSentences => 1,
            Strategy::CapLabels => 2,
            Strategy::SwapLabels => 3,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Strategy plus fraction plus seed; fully determines a corrupted dataset.
///
/// For `CapSentences` and `CapLabels` the fraction is the portion to *keep*;
/// for `SwapLabels` it is the portion to *corrupt*.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CorruptionSpec {
    pub strategy: Strategy,
    pub fraction: f64,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn apply(&self, dataset: &Dataset) -> Result<Dataset, CorruptError> {
        match self.strategy {
            Strategy::CapSentences => cap_sentences(dataset, self.fraction, self.seed),
            Strategy::CapLabels => cap_labels(dataset, self.fraction, self.seed),
            Strategy::SwapLabels => swap_labels(dataset, self.fraction, self.seed),
        }
    }
}

/// `floor(fraction * count + 0.5)`, capped at `count`.
///
/// The rounding rule is part of the reproducibility contract: exact touched
/// counts must agree across implementations.
pub fn exact_count(fraction: f64, count: usize) -> usize {
    let k = (fraction * count as f64 + 0.5).floor() as usize;
    k.min(count)
}

/// Selects `k` distinct indices out of `0..n` via a seeded Fisher–Yates
/// shuffle, returned in ascending order.
fn select_indices(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    Pcg32::from_seed(seed).shuffle(&mut indices);
    indices.truncate(k);
    indices.sort_unstable();
    indices
}

/// Keeps a random fraction of sentences, in original document order.
///
/// Keeps exactly `floor(f*S + 0.5)` sentences, clamped to at least 1 when
/// `keep_fraction > 0`. Kept sentences are untouched.
pub fn cap_sentences(
    dataset: &Dataset,
    keep_fraction: f64,
    seed: u64,
) -> Result<Dataset, CorruptError> {
    let total = dataset.sentences.len();
    if total == 0 {
        return Err(CorruptError::EmptyDataset);
    }
    let mut k = exact_count(keep_fraction, total);
    if keep_fraction > 0.0 {
        k = k.max(1);
    }
    let kept = select_indices(total, k, seed);
    let sentences = kept
        .iter()
        .map(|&i| dataset.sentences[i].clone())
        .collect();
    Ok(Dataset::new(
        sentences,
        dataset.scheme.clone(),
        dataset.provenance.clone(),
    ))
}

/// Erases a random fraction of entity spans to `O`, span-atomically.
///
/// Keeps exactly `floor(f*E + 0.5)` of the `E` spans, selected globally
/// across the dataset; some sentences may lose every annotation. Sentence
/// count and token texts are unchanged.
pub fn cap_labels(
    dataset: &Dataset,
    keep_fraction: f64,
    seed: u64,
) -> Result<Dataset, CorruptError> {
    if dataset.sentences.is_empty() {
        return Err(CorruptError::EmptyDataset);
    }
    let index = extract_spans(dataset)?;
    let k = exact_count(keep_fraction, index.len());
    let kept_ids = select_indices(index.len(), k, seed);
    let kept: Vec<_> = kept_ids.iter().map(|&i| index.spans[i].clone()).collect();
    let kept_index = SpanIndex::from_spans(kept, dataset.sentences.len())?;
    Ok(apply_spans(dataset, &kept_index)?)
}

/// Relabels a random fraction of entity spans with an incorrect type.
///
/// Exactly `floor(f*E + 0.5)` spans are selected; each gets a type drawn
/// uniformly from the scheme's other entity types. Span boundaries and the
/// total span count are invariant.
pub fn swap_labels(
    dataset: &Dataset,
    corrupt_fraction: f64,
    seed: u64,
) -> Result<Dataset, CorruptError> {
    if dataset.sentences.is_empty() {
        return Err(CorruptError::EmptyDataset);
    }
    let n_types = dataset.scheme.entity_types.len();
    if n_types < 2 {
        return Err(CorruptError::DegenerateScheme(n_types));
    }
    let index = extract_spans(dataset)?;
    let k = exact_count(corrupt_fraction, index.len());
    let selected = select_indices(index.len(), k, seed);

    let mut rng = Pcg32::from_seed(SplitMix64::new(seed).next_u64());
    let mut spans = index.spans.clone();
    // Selected spans are relabeled in document order.
    for &i in &selected {
        let current = spans[i].entity_type.clone();
        let others: Vec<&String> = dataset
            .scheme
            .entity_types
            .iter()
            .filter(|t| **t != current)
            .collect();
        let choice = rng.bounded(others.len() as u32) as usize;
        spans[i].entity_type = others[choice].clone();
    }
    let swapped = SpanIndex::from_spans(spans, dataset.sentences.len())?;
    Ok(apply_spans(dataset, &swapped)?)
}

/// The combined quantity-then-quality corruption: first keep a fraction of
/// sentences, then keep a fraction of the remaining labels.
///
/// The two stage seeds are two successive SplitMix64 outputs of `seed`.
pub fn compose_quantity_quality(
    dataset: &Dataset,
    sentence_keep: f64,
    label_keep: f64,
    seed: u64,
) -> Result<Dataset, CorruptError> {
    let mut mixer = SplitMix64::new(seed);
    let seed_sentences = mixer.next_u64();
    let seed_labels = mixer.next_u64();
    let reduced = cap_sentences(dataset, sentence_keep, seed_sentences)?;
    cap_labels(&reduced, label_keep, seed_labels)
}

/// Fraction of entity spans surviving in `reduced` relative to `original`.
///
/// Returns 0 when both datasets are entity-free.
pub fn label_retention(original: &Dataset, reduced: &Dataset) -> Result<f64, CorruptError> {
    let original_count = extract_spans(original)?.len();
    let reduced_count = extract_spans(reduced)?.len();
    if original_count == 0 {
        if reduced_count == 0 {
            return Ok(0.0);
        }
        return Err(CorruptError::EmptyOriginalWithNonemptyReduced(
            reduced_count,
        ));
    }
    Ok(reduced_count as f64 / original_count as f64)
}

/// Counts input spans with no exact `(sentence, start, end, type)` match in
/// the output. When the corruption removed sentences (so indices shifted),
/// falls back to the difference in span counts.
pub fn count_affected_spans(
    original: &Dataset,
    corrupted: &Dataset,
) -> Result<usize, CorruptError> {
    let before = extract_spans(original)?;
    let after = extract_spans(corrupted)?;
    if original.sentences.len() != corrupted.sentences.len() {
        return Ok(before.len().saturating_sub(after.len()));
    }
    let after_set: std::collections::HashSet<&crate::span::Span> = after.spans.iter().collect();
    Ok(before
        .spans
        .iter()
        .filter(|s| !after_set.contains(s))
        .count())
}
