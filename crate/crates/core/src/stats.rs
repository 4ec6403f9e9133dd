//! Corpus statistics: sentences, tokens, entities, entities per sentence,
//! and entity density.
//!
//! Density is `entities / tokens`. The alternative reading — the fraction of
//! tokens covered by entity spans — is reported separately as
//! `entity_token_coverage`, since multiword entities make the two differ.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::conll::Dataset;
use crate::span::{extract_spans, SpanError};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("dataset has no sentences")]
    EmptyDataset,
    #[error(transparent)]
    Span(#[from] SpanError),
}

/// Headline statistics for one dataset.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StatsReport {
    pub sentences: usize,
    pub tokens: usize,
    pub entities: usize,
    /// entities / sentences
    pub entities_per_sentence: f64,
    /// entities / tokens
    pub entity_density: f64,
    /// fraction of tokens covered by an entity span
    pub entity_token_coverage: f64,
    pub per_type_counts: BTreeMap<String, usize>,
}

impl StatsReport {
    /// `entities_per_sentence` rounded for table display.
    pub fn entities_per_sentence_display(&self) -> f64 {
        round1(self.entities_per_sentence)
    }

    /// Density as a percentage rounded for table display.
    pub fn entity_density_pct_display(&self) -> f64 {
        round1(self.entity_density * 100.0)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("stats are serializable");
        out.push('\n');
        out
    }

    /// Plain-text table rendering with display rounding applied.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<22} {:>12}\n", "sentences", self.sentences));
        out.push_str(&format!("{:<22} {:>12}\n", "tokens", self.tokens));
        out.push_str(&format!("{:<22} {:>12}\n", "entities", self.entities));
        out.push_str(&format!(
            "{:<22} {:>12.1}\n",
            "entities/sentence",
            self.entities_per_sentence_display()
        ));
        out.push_str(&format!(
            "{:<22} {:>11.1}%\n",
            "entity density",
            self.entity_density_pct_display()
        ));
        for (ty, count) in &self.per_type_counts {
            out.push_str(&format!("{:<22} {:>12}\n", format!("entities[{ty}]"), count));
        }
        out
    }
}

/// Round half away from zero to one decimal; for the non-negative values
/// reported here that is round-half-up.
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

pub fn compute_stats(dataset: &Dataset) -> Result<StatsReport, StatsError> {
    if dataset.sentences.is_empty() {
        return Err(StatsError::EmptyDataset);
    }
    let index = extract_spans(dataset)?;
    let sentences = dataset.sentences.len();
    let tokens = dataset.token_count();
    let entities = index.len();
    let mut per_type_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut covered_tokens = 0usize;
    for span in &index.spans {
        *per_type_counts.entry(span.entity_type.clone()).or_insert(0) += 1;
        covered_tokens += span.len();
    }
    Ok(StatsReport {
        sentences,
        tokens,
        entities,
        entities_per_sentence: entities as f64 / sentences as f64,
        entity_density: entities as f64 / tokens as f64,
        entity_token_coverage: covered_tokens as f64 / tokens as f64,
        per_type_counts,
    })
}
