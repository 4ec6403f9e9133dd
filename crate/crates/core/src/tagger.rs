//! Averaged structured perceptron tagger with first-order Viterbi decoding.
//!
//! The model scores each token against every BIO tag using sparse binary
//! features (word identity, lowercased form, affixes, word shape, neighbor
//! identities) plus tag-transition weights, and decodes the best sequence
//! over a lattice that hard-excludes invalid BIO transitions — so predictions
//! are BIO2-valid by construction.
//!
//! Training is deliberately single-threaded: weight updates are
//! order-dependent and ordering is part of the determinism contract.
//! `(dataset bytes, config)` fully determines the model and therefore every
//! prediction.

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::conll::{Dataset, Sentence, Tag, TagSchemeConfig, Token};
use crate::rng::Pcg32;

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("training dataset has no sentences")]
    EmptyDataset,
    #[error("prediction input has no sentences")]
    EmptyInput,
    #[error("training data is not BIO2-valid")]
    InvalidBio,
    #[error("model file line {line}: {reason}")]
    ModelFormat { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Training knobs. Averaging is on by default; turning it off keeps the raw
/// final weights (useful only for diagnostics).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
    pub averaged: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            seed: 1,
            averaged: true,
        }
    }
}

const MODEL_HEADER: &str = "nerlab-model v1";
// Reserved feature-name prefix for transition weights.
const TRANS_FEATURE: &str = "__trans__:";
const BOS_MARKER: &str = "__BOS__";

/// A trained tagger: per-(feature, tag) weights, tag-transition weights, the
/// tag inventory derived from the scheme, and training metadata.
#[derive(Debug, Clone)]
pub struct TaggerModel {
    scheme: TagSchemeConfig,
    /// Index 0 is `O`; then `B-t`, `I-t` per scheme order.
    tags: Vec<Tag>,
    feature_ids: HashMap<String, usize>,
    feature_names: Vec<String>,
    /// `weights[feature][tag]`
    weights: Vec<Vec<f64>>,
    /// `transitions[prev][cur]`; row `tags.len()` is the start-of-sentence row.
    transitions: Vec<Vec<f64>>,
    pub epochs: usize,
    pub seed: u64,
    pub training_corpus_hash: String,
}

fn tag_inventory(scheme: &TagSchemeConfig) -> Vec<Tag> {
    let mut tags = vec![Tag::Outside];
    for ty in &scheme.entity_types {
        tags.push(Tag::Begin(ty.clone()));
        tags.push(Tag::Inside(ty.clone()));
    }
    tags
}

/// BIO lattice constraint: `I-t` only after `B-t` or `I-t`.
fn transition_allowed(tags: &[Tag], prev: Option<usize>, cur: usize) -> bool {
    match &tags[cur] {
        Tag::Inside(ty) => match prev {
            Some(p) => matches!(&tags[p], Tag::Begin(t) | Tag::Inside(t) if t == ty),
            None => false,
        },
        _ => true,
    }
}

/// Emission features for one token position. Texts contain no whitespace, so
/// the generated names are safe for the tab-separated model format.
fn token_features(sentence: &[Token], position: usize, out: &mut Vec<String>) {
    let word = &sentence[position].text;
    out.push(format!("w={word}"));
    out.push(format!("lw={}", word.to_lowercase()));
    let chars: Vec<char> = word.chars().collect();
    for k in 1..=3usize {
        if chars.len() >= k {
            let prefix: String = chars[..k].iter().collect();
            let suffix: String = chars[chars.len() - k..].iter().collect();
            out.push(format!("p{k}={prefix}"));
            out.push(format!("s{k}={suffix}"));
        }
    }
    out.push(format!("shape={}", word_shape(word)));
    match position.checked_sub(1) {
        Some(prev) => out.push(format!("w-1={}", sentence[prev].text)),
        None => out.push("w-1=<BOS>".to_string()),
    }
    match sentence.get(position + 1) {
        Some(next) => out.push(format!("w+1={}", next.text)),
        None => out.push("w+1=<EOS>".to_string()),
    }
}

/// Collapsed character-class pattern: `X` upper, `x` lower, `d` digit,
/// `a` uncased letter, `p` everything else.
fn word_shape(word: &str) -> String {
    let mut shape = String::new();
    let mut last = ' ';
    for ch in word.chars() {
        let class = if ch.is_uppercase() {
            'X'
        } else if ch.is_lowercase() {
            'x'
        } else if ch.is_ascii_digit() {
            'd'
        } else if ch.is_alphabetic() {
            'a'
        } else {
            'p'
        };
        if class != last {
            shape.push(class);
            last = class;
        }
    }
    shape
}

/// Lazily-averaged weight accumulator.
struct Averaged {
    current: Vec<Vec<f64>>,
    totals: Vec<Vec<f64>>,
    stamps: Vec<Vec<u64>>,
}

impl Averaged {
    fn new() -> Averaged {
        Averaged {
            current: Vec::new(),
            totals: Vec::new(),
            stamps: Vec::new(),
        }
    }

    fn ensure(&mut self, rows: usize, cols: usize) {
        while self.current.len() < rows {
            self.current.push(vec![0.0; cols]);
            self.totals.push(vec![0.0; cols]);
            self.stamps.push(vec![0; cols]);
        }
    }

    fn update(&mut self, row: usize, col: usize, delta: f64, step: u64) {
        let elapsed = (step - self.stamps[row][col]) as f64;
        self.totals[row][col] += elapsed * self.current[row][col];
        self.stamps[row][col] = step;
        self.current[row][col] += delta;
    }

    /// Final weights: running average over all steps, or the raw weights.
    fn finish(mut self, total_steps: u64, averaged: bool) -> Vec<Vec<f64>> {
        if !averaged || total_steps == 0 {
            return self.current;
        }
        for row in 0..self.current.len() {
            for col in 0..self.current[row].len() {
                let elapsed = (total_steps - self.stamps[row][col]) as f64;
                self.totals[row][col] += elapsed * self.current[row][col];
                self.totals[row][col] /= total_steps as f64;
            }
        }
        self.totals
    }
}

impl TaggerModel {
    /// Trains an averaged perceptron on `dataset`.
    ///
    /// Per epoch: shuffle sentences with the seeded generator, Viterbi-decode
    /// each, and on a mismatch push weights toward the gold sequence and away
    /// from the prediction (emissions and transitions alike).
    pub fn train(dataset: &Dataset, cfg: &TrainConfig) -> Result<TaggerModel, TaggerError> {
        if dataset.sentences.is_empty() {
            return Err(TaggerError::EmptyDataset);
        }
        if !dataset.is_valid_bio() {
            return Err(TaggerError::InvalidBio);
        }

        let tags = tag_inventory(&dataset.scheme);
        let n_tags = tags.len();
        let tag_id: HashMap<&Tag, usize> = tags.iter().enumerate().map(|(i, t)| (t, i)).collect();

        // Pre-extract features and intern names in document order, so the
        // feature table does not depend on the epoch shuffle.
        let mut feature_ids: HashMap<String, usize> = HashMap::new();
        let mut feature_names: Vec<String> = Vec::new();
        let mut corpus: Vec<(Vec<Vec<usize>>, Vec<usize>)> =
            Vec::with_capacity(dataset.sentences.len());
        let mut scratch = Vec::with_capacity(16);
        for sentence in &dataset.sentences {
            let mut rows = Vec::with_capacity(sentence.len());
            let mut gold = Vec::with_capacity(sentence.len());
            for position in 0..sentence.len() {
                scratch.clear();
                token_features(&sentence.tokens, position, &mut scratch);
                let ids = scratch
                    .iter()
                    .map(|name| match feature_ids.get(name) {
                        Some(&id) => id,
                        None => {
                            let id = feature_names.len();
                            feature_ids.insert(name.clone(), id);
                            feature_names.push(name.clone());
                            id
                        }
                    })
                    .collect();
                rows.push(ids);
                gold.push(tag_id[&sentence.tokens[position].tag]);
            }
            corpus.push((rows, gold));
        }

        let mut emissions = Averaged::new();
        emissions.ensure(feature_names.len(), n_tags);
        let mut transitions = Averaged::new();
        transitions.ensure(n_tags + 1, n_tags);

        let mut order: Vec<usize> = (0..corpus.len()).collect();
        let mut rng = Pcg32::from_seed(cfg.seed);
        let mut step = 0u64;

        for _ in 0..cfg.epochs.max(1) {
            rng.shuffle(&mut order);
            for &idx in &order {
                step += 1;
                let (features, gold) = &corpus[idx];
                let predicted = viterbi(
                    features,
                    &tags,
                    |f, t| emissions.current[f][t],
                    |p, c| transitions.current[p][c],
                );
                if &predicted == gold {
                    continue;
                }
                for (pos, ids) in features.iter().enumerate() {
                    if gold[pos] != predicted[pos] {
                        for &f in ids {
                            emissions.update(f, gold[pos], 1.0, step);
                            emissions.update(f, predicted[pos], -1.0, step);
                        }
                    }
                    let prev_gold = if pos == 0 { n_tags } else { gold[pos - 1] };
                    let prev_pred = if pos == 0 { n_tags } else { predicted[pos - 1] };
                    if (prev_gold, gold[pos]) != (prev_pred, predicted[pos]) {
                        transitions.update(prev_gold, gold[pos], 1.0, step);
                        transitions.update(prev_pred, predicted[pos], -1.0, step);
                    }
                }
            }
        }

        let weights = emissions.finish(step, cfg.averaged);
        let transitions = transitions.finish(step, cfg.averaged);

        Ok(TaggerModel {
            scheme: dataset.scheme.clone(),
            tags,
            feature_ids,
            feature_names,
            weights,
            transitions,
            epochs: cfg.epochs,
            seed: cfg.seed,
            training_corpus_hash: corpus_hash(dataset),
        })
    }

    pub fn scheme(&self) -> &TagSchemeConfig {
        &self.scheme
    }

    /// Tags every sentence of `input`, ignoring its existing tags. Unknown
    /// features simply score zero, which leaves shape/affix features to carry
    /// out-of-vocabulary words.
    pub fn predict(&self, input: &Dataset) -> Result<Dataset, TaggerError> {
        if input.sentences.is_empty() {
            return Err(TaggerError::EmptyInput);
        }
        let mut sentences = Vec::with_capacity(input.sentences.len());
        let mut scratch = Vec::with_capacity(16);
        for sentence in &input.sentences {
            let mut features: Vec<Vec<usize>> = Vec::with_capacity(sentence.len());
            for position in 0..sentence.len() {
                scratch.clear();
                token_features(&sentence.tokens, position, &mut scratch);
                features.push(
                    scratch
                        .iter()
                        .filter_map(|name| self.feature_ids.get(name).copied())
                        .collect(),
                );
            }
            let best = viterbi(
                &features,
                &self.tags,
                |f, t| self.weights[f][t],
                |p, c| self.transitions[p][c],
            );
            sentences.push(Sentence::new(
                sentence
                    .tokens
                    .iter()
                    .zip(&best)
                    .map(|(token, &t)| Token::new(token.text.clone(), self.tags[t].clone()))
                    .collect(),
            ));
        }
        Ok(Dataset::new(
            sentences,
            self.scheme.clone(),
            format!("predicted({})", input.provenance),
        ))
    }

    /// Serializes to the versioned, sorted, line-oriented text format:
    /// header and metadata lines, then `feature<TAB>tag<TAB>weight` rows
    /// (transition rows use the reserved `__trans__:` feature names).
    /// Zero weights are omitted.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        for (f, name) in self.feature_names.iter().enumerate() {
            for (t, tag) in self.tags.iter().enumerate() {
                let w = self.weights[f][t];
                if w != 0.0 {
                    lines.push(format!("{name}\t{tag}\t{w}"));
                }
            }
        }
        for prev in 0..=self.tags.len() {
            let prev_name = if prev == self.tags.len() {
                BOS_MARKER.to_string()
            } else {
                self.tags[prev].to_string()
            };
            for (t, tag) in self.tags.iter().enumerate() {
                let w = self.transitions[prev][t];
                if w != 0.0 {
                    lines.push(format!("{TRANS_FEATURE}{prev_name}\t{tag}\t{w}"));
                }
            }
        }
        lines.sort_unstable();

        let mut out = String::new();
        let _ = writeln!(out, "{MODEL_HEADER}");
        let _ = writeln!(out, "entity-types\t{}", self.scheme.entity_types.join(","));
        let _ = writeln!(out, "epochs\t{}", self.epochs);
        let _ = writeln!(out, "seed\t{}", self.seed);
        let _ = writeln!(out, "corpus-sha256\t{}", self.training_corpus_hash);
        let _ = writeln!(out, "weights\t{}", lines.len());
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<TaggerModel, TaggerError> {
        let mut lines = text.lines().enumerate();
        let bad = |line: usize, reason: &str| TaggerError::ModelFormat {
            line: line + 1,
            reason: reason.to_string(),
        };

        match lines.next() {
            Some((_, header)) if header == MODEL_HEADER => {}
            Some((i, _)) => return Err(bad(i, "unrecognized model header")),
            None => return Err(bad(0, "empty model file")),
        }

        let mut entity_types: Option<Vec<String>> = None;
        let mut epochs = 0usize;
        let mut seed = 0u64;
        let mut hash = String::new();
        let mut declared = 0usize;
        for _ in 0..5 {
            let (i, line) = lines.next().ok_or_else(|| bad(1, "truncated metadata"))?;
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| bad(i, "metadata line missing tab"))?;
            match key {
                "entity-types" => {
                    entity_types = Some(value.split(',').map(str::to_string).collect())
                }
                "epochs" => epochs = value.parse().map_err(|_| bad(i, "bad epochs"))?,
                "seed" => seed = value.parse().map_err(|_| bad(i, "bad seed"))?,
                "corpus-sha256" => hash = value.to_string(),
                "weights" => declared = value.parse().map_err(|_| bad(i, "bad weight count"))?,
                _ => return Err(bad(i, "unknown metadata key")),
            }
        }
        let entity_types = entity_types.ok_or_else(|| bad(1, "missing entity-types"))?;
        let scheme = TagSchemeConfig::new(entity_types, crate::conll::BioPolicy::Strict)
            .map_err(|e| bad(1, &e.to_string()))?;
        let tags = tag_inventory(&scheme);
        let n_tags = tags.len();
        let tag_lookup: HashMap<String, usize> = tags
            .iter()
            .enumerate()
            .map(|(i, t)| (t.to_string(), i))
            .collect();

        let mut model = TaggerModel {
            scheme,
            tags,
            feature_ids: HashMap::new(),
            feature_names: Vec::new(),
            weights: Vec::new(),
            transitions: vec![vec![0.0; n_tags]; n_tags + 1],
            epochs,
            seed,
            training_corpus_hash: hash,
        };

        let mut parsed = 0usize;
        for (i, line) in lines {
            let mut parts = line.splitn(3, '\t');
            let (feature, tag, weight) = match (parts.next(), parts.next(), parts.next()) {
                (Some(f), Some(t), Some(w)) => (f, t, w),
                _ => return Err(bad(i, "expected feature<TAB>tag<TAB>weight")),
            };
            let tag_idx = *tag_lookup.get(tag).ok_or_else(|| bad(i, "unknown tag"))?;
            let weight: f64 = weight.parse().map_err(|_| bad(i, "bad weight"))?;
            if let Some(prev_name) = feature.strip_prefix(TRANS_FEATURE) {
                let prev = if prev_name == BOS_MARKER {
                    n_tags
                } else {
                    *tag_lookup
                        .get(prev_name)
                        .ok_or_else(|| bad(i, "unknown transition source"))?
                };
                model.transitions[prev][tag_idx] = weight;
            } else {
                let id = match model.feature_ids.get(feature) {
                    Some(&id) => id,
                    None => {
                        let id = model.feature_names.len();
                        model.feature_ids.insert(feature.to_string(), id);
                        model.feature_names.push(feature.to_string());
                        model.weights.push(vec![0.0; n_tags]);
                        id
                    }
                };
                model.weights[id][tag_idx] = weight;
            }
            parsed += 1;
        }
        if parsed != declared {
            return Err(bad(0, "weight count does not match declaration"));
        }
        Ok(model)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), TaggerError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<TaggerModel, TaggerError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}

/// SHA-256 of the canonical serialization, hex-encoded.
fn corpus_hash(dataset: &Dataset) -> String {
    let bytes = crate::conll::serialize_conll(dataset);
    let digest = Sha256::digest(&bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// First-order Viterbi over the BIO-constrained lattice. Ties break toward
/// the lowest tag index, so an all-zero model deterministically predicts `O`.
fn viterbi(
    features: &[Vec<usize>],
    tags: &[Tag],
    emission: impl Fn(usize, usize) -> f64,
    transition: impl Fn(usize, usize) -> f64,
) -> Vec<usize> {
    let n_tags = tags.len();
    let length = features.len();
    if length == 0 {
        return Vec::new();
    }
    let mut score = vec![f64::NEG_INFINITY; n_tags];
    let mut back: Vec<Vec<usize>> = vec![vec![0; n_tags]; length];

    let emit = |ids: &[usize], t: usize| -> f64 { ids.iter().map(|&f| emission(f, t)).sum() };

    for (t, cell) in score.iter_mut().enumerate() {
        if transition_allowed(tags, None, t) {
            *cell = transition(n_tags, t) + emit(&features[0], t);
        }
    }
    for pos in 1..length {
        let mut next = vec![f64::NEG_INFINITY; n_tags];
        for t in 0..n_tags {
            let e = emit(&features[pos], t);
            let mut best = f64::NEG_INFINITY;
            let mut best_prev = usize::MAX;
            for (p, &prev_score) in score.iter().enumerate() {
                if prev_score == f64::NEG_INFINITY || !transition_allowed(tags, Some(p), t) {
                    continue;
                }
                let candidate = prev_score + transition(p, t);
                if candidate > best {
                    best = candidate;
                    best_prev = p;
                }
            }
            if best_prev != usize::MAX {
                next[t] = best + e;
                back[pos][t] = best_prev;
            }
        }
        score = next;
    }

    let mut best_tag = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (t, &final_score) in score.iter().enumerate() {
        if final_score > best_score {
            best_score = final_score;
            best_tag = t;
        }
    }
    let mut path = vec![0usize; length];
    path[length - 1] = best_tag;
    for pos in (1..length).rev() {
        path[pos - 1] = back[pos][path[pos]];
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrupt::cap_labels;
    use crate::scoring::score;
    use crate::synth::SynthConfig;

    #[test]
    fn separable_corpus_reaches_high_heldout_f1() {
        let train = SynthConfig::new(200, 11).generate();
        let test = SynthConfig::new(80, 990).generate();
        let model = TaggerModel::train(&train, &TrainConfig::default()).unwrap();
        let predicted = model.predict(&test).unwrap();
        let report = score(&test, &predicted).unwrap();
        assert!(
            report.micro.f1 >= 0.95,
            "held-out micro F1 {} below 0.95",
            report.micro.f1
        );
    }

    #[test]
    fn training_data_is_reproduced_after_convergence() {
        let train = SynthConfig::new(200, 11).generate();
        let model = TaggerModel::train(&train, &TrainConfig::default()).unwrap();
        let predicted = model.predict(&train).unwrap();
        let report = score(&train, &predicted).unwrap();
        assert!(
            report.micro.recall >= 0.99,
            "training recall {} below 0.99",
            report.micro.recall
        );
    }

    #[test]
    fn training_is_deterministic() {
        let train = SynthConfig::new(60, 3).generate();
        let cfg = TrainConfig {
            epochs: 1,
            ..TrainConfig::default()
        };
        let a = TaggerModel::train(&train, &cfg).unwrap();
        let b = TaggerModel::train(&train, &cfg).unwrap();
        assert_eq!(a.to_text(), b.to_text());

        let input = SynthConfig::new(20, 77).generate();
        let pa = a.predict(&input).unwrap();
        let pb = b.predict(&input).unwrap();
        assert!(pa.content_eq(&pb));
    }

    #[test]
    fn all_outside_training_predicts_all_outside() {
        let base = SynthConfig::new(40, 5).generate();
        let blank = cap_labels(&base, 0.0, 0).unwrap();
        let model = TaggerModel::train(&blank, &TrainConfig::default()).unwrap();
        let predicted = model.predict(&base).unwrap();
        assert!(predicted
            .sentences
            .iter()
            .flat_map(|s| &s.tokens)
            .all(|t| t.tag == Tag::Outside));
        let report = score(&base, &predicted).unwrap();
        assert_eq!(report.micro.f1, 0.0);
    }

    #[test]
    fn predictions_are_always_bio_valid() {
        let train = SynthConfig::new(50, 21).generate();
        let model = TaggerModel::train(
            &train,
            &TrainConfig {
                epochs: 2,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        // out-of-vocabulary heavy input
        let mut weird = SynthConfig::new(30, 555).generate();
        for sentence in &mut weird.sentences {
            for (i, token) in sentence.tokens.iter_mut().enumerate() {
                if i % 3 == 0 {
                    token.text = format!("Zz{i}q");
                }
            }
        }
        let predicted = model.predict(&weird).unwrap();
        assert!(predicted.is_valid_bio());
    }

    #[test]
    fn model_text_round_trips() {
        let train = SynthConfig::new(40, 2).generate();
        let model = TaggerModel::train(&train, &TrainConfig::default()).unwrap();
        let text = model.to_text();
        let reloaded = TaggerModel::from_text(&text).unwrap();
        assert_eq!(reloaded.to_text(), text);

        let input = SynthConfig::new(15, 8).generate();
        let a = model.predict(&input).unwrap();
        let b = reloaded.predict(&input).unwrap();
        assert!(a.content_eq(&b));
        assert_eq!(reloaded.epochs, model.epochs);
        assert_eq!(reloaded.seed, model.seed);
        assert_eq!(reloaded.training_corpus_hash, model.training_corpus_hash);
    }

    #[test]
    fn model_format_errors_are_reported() {
        assert!(matches!(
            TaggerModel::from_text("not a model\n").unwrap_err(),
            TaggerError::ModelFormat { line: 1, .. }
        ));
        let train = SynthConfig::new(10, 2).generate();
        let model = TaggerModel::train(
            &train,
            &TrainConfig {
                epochs: 1,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        let mut text = model.to_text();
        text.push_str("extra\tB-PER\t1.5\n");
        assert!(matches!(
            TaggerModel::from_text(&text).unwrap_err(),
            TaggerError::ModelFormat { .. }
        ));
    }

    #[test]
    fn more_supervision_does_not_hurt() {
        // Statistical monotonicity over three seeds: full labels vs 10%.
        let test = SynthConfig::new(60, 991).generate();
        let mut full_total = 0.0;
        let mut capped_total = 0.0;
        for seed in [1u64, 2, 3] {
            let train = SynthConfig::new(150, seed).generate();
            let cfg = TrainConfig {
                seed,
                ..TrainConfig::default()
            };
            let full_model = TaggerModel::train(&train, &cfg).unwrap();
            full_total += score(&test, &full_model.predict(&test).unwrap())
                .unwrap()
                .micro
                .f1;
            let capped = cap_labels(&train, 0.1, seed).unwrap();
            let capped_model = TaggerModel::train(&capped, &cfg).unwrap();
            capped_total += score(&test, &capped_model.predict(&test).unwrap())
                .unwrap()
                .micro
                .f1;
        }
        assert!(
            full_total / 3.0 >= capped_total / 3.0,
            "full {} vs capped {}",
            full_total / 3.0,
            capped_total / 3.0
        );
    }

    #[test]
    fn empty_inputs_error() {
        let empty = Dataset::new(Vec::new(), TagSchemeConfig::default(), String::new());
        assert!(matches!(
            TaggerModel::train(&empty, &TrainConfig::default()).unwrap_err(),
            TaggerError::EmptyDataset
        ));
        let train = SynthConfig::new(10, 1).generate();
        let model = TaggerModel::train(
            &train,
            &TrainConfig {
                epochs: 1,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert!(matches!(
            model.predict(&empty).unwrap_err(),
            TaggerError::EmptyInput
        ));
    }

    #[test]
    fn word_shape_classes() {
        assert_eq!(word_shape("Paris"), "Xx");
        assert_eq!(word_shape("2023"), "d");
        assert_eq!(word_shape("U.N."), "XpXp");
        assert_eq!(word_shape("per007"), "xd");
        assert_eq!(word_shape("አዲስ"), "a");
    }
}
