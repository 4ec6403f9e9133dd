//! Entity-level precision/recall/F1 with exact span matching, plus the
//! baseline normalization used by the experiment runner.
//!
//! A predicted span counts as a true positive only when its sentence, start,
//! end, and entity type all match a gold span (CoNLL shared-task semantics;
//! no partial credit). Empty denominators score 0 so that degenerate models
//! (predicting nothing) are comparable across corruption levels.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::conll::Dataset;
use crate::span::{extract_spans, Span, SpanError};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("gold/pred shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("baseline micro F1 is zero; normalization undefined")]
    ZeroBaseline,
    #[error(transparent)]
    Span(#[from] SpanError),
}

/// Counts and derived metrics for one entity type (or the micro pool).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TypeScore {
    pub tp: usize,
    pub pred_count: usize,
    pub gold_count: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl TypeScore {
    fn from_counts(tp: usize, pred_count: usize, gold_count: usize) -> TypeScore {
        let precision = if pred_count == 0 {
            0.0
        } else {
            tp as f64 / pred_count as f64
        };
        let recall = if gold_count == 0 {
            0.0
        } else {
            tp as f64 / gold_count as f64
        };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        TypeScore {
            tp,
            pred_count,
            gold_count,
            precision,
            recall,
            f1,
        }
    }
}

/// Per-type and micro-averaged scores.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScoreReport {
    pub per_type: BTreeMap<String, TypeScore>,
    pub micro: TypeScore,
}

impl ScoreReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scores are serializable");
        out.push('\n');
        out
    }

    /// Plain-text table: one row per entity type plus the micro pool.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<10} {:>10} {:>10} {:>10} {:>6} {:>6} {:>6}\n",
            "type", "precision", "recall", "f1", "tp", "pred", "gold"
        );
        let mut row = |name: &str, ts: &TypeScore| {
            out.push_str(&format!(
                "{:<10} {:>10.4} {:>10.4} {:>10.4} {:>6} {:>6} {:>6}\n",
                name, ts.precision, ts.recall, ts.f1, ts.tp, ts.pred_count, ts.gold_count
            ));
        };
        for (ty, ts) in &self.per_type {
            row(ty, ts);
        }
        row("micro", &self.micro);
        out
    }
}

/// Scores `pred` against `gold` by exact span matching.
///
/// Both datasets must have identical sentence counts and token texts; only
/// the tags may differ.
pub fn score(gold: &Dataset, pred: &Dataset) -> Result<ScoreReport, ScoreError> {
    if gold.sentences.len() != pred.sentences.len() {
        return Err(ScoreError::ShapeMismatch(format!(
            "sentence counts differ: gold {} vs pred {}",
            gold.sentences.len(),
            pred.sentences.len()
        )));
    }
    for (i, (g, p)) in gold.sentences.iter().zip(&pred.sentences).enumerate() {
        if g.len() != p.len() {
            return Err(ScoreError::ShapeMismatch(format!(
                "sentence {i} lengths differ: gold {} vs pred {}",
                g.len(),
                p.len()
            )));
        }
        for (j, (gt, pt)) in g.tokens.iter().zip(&p.tokens).enumerate() {
            if gt.text != pt.text {
                return Err(ScoreError::ShapeMismatch(format!(
                    "token {i}:{j} differs: gold {:?} vs pred {:?}",
                    gt.text, pt.text
                )));
            }
        }
    }

    let gold_spans = extract_spans(gold)?;
    let pred_spans = extract_spans(pred)?;
    let gold_set: HashSet<&Span> = gold_spans.spans.iter().collect();

    let mut types: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for span in &gold_spans.spans {
        types.entry(span.entity_type.clone()).or_default().2 += 1;
    }
    for span in &pred_spans.spans {
        let entry = types.entry(span.entity_type.clone()).or_default();
        entry.1 += 1;
        if gold_set.contains(span) {
            entry.0 += 1;
        }
    }

    let mut per_type = BTreeMap::new();
    let (mut tp, mut pred_count, mut gold_count) = (0, 0, 0);
    for (ty, (t, p, g)) in types {
        tp += t;
        pred_count += p;
        gold_count += g;
        per_type.insert(ty, TypeScore::from_counts(t, p, g));
    }
    Ok(ScoreReport {
        per_type,
        micro: TypeScore::from_counts(tp, pred_count, gold_count),
    })
}

/// Raw F1 divided by the uncorrupted-baseline F1 for the same model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormalizedScore {
    pub raw_f1: f64,
    pub baseline_f1: f64,
    /// May exceed 1: a corrupted run can beat its baseline by chance.
    pub normalized: f64,
}

/// Normalizes a raw score by a baseline score (micro F1 ratio).
pub fn normalize(raw: &ScoreReport, baseline: &ScoreReport) -> Result<NormalizedScore, ScoreError> {
    if baseline.micro.f1 <= 0.0 {
        return Err(ScoreError::ZeroBaseline);
    }
    Ok(NormalizedScore {
        raw_f1: raw.micro.f1,
        baseline_f1: baseline.micro.f1,
        normalized: raw.micro.f1 / baseline.micro.f1,
    })
}
