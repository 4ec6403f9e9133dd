//! Corruption-grid experiment orchestration.
//!
//! A grid runs every `(strategy, quality level, seed[, permutation])` cell:
//! corrupt the training split (never the test split), train the baseline
//! tagger, score against gold test data, and normalize by the same seed's
//! uncorrupted run. Combined quantity-times-quality cells work the same way
//! over `(sentence_keep, label_keep)` pairs.
//!
//! Quality levels share one axis across strategies: for the capping
//! strategies the level is the keep fraction, for label swapping a level `q`
//! means corrupting `1 - q` of the spans, so `q = 1` is always the untouched
//! baseline. A level-1.0 corruption is the identity, so each seed's baseline
//! is trained once and shared.
//!
//! Cells are independent and run in parallel; every cell's randomness derives
//! only from its grid coordinates, and rows are emitted in grid order, so
//! result tables are byte-identical across runs and thread counts.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::conll::Dataset;
use crate::corrupt::{
    cap_labels, cap_sentences, compose_quantity_quality, count_affected_spans, swap_labels,
    CorruptError, Strategy,
};
use crate::rng::derive_seed;
use crate::scoring::{score, ScoreError};
use crate::span::{extract_spans, SpanError};
use crate::tagger::{TaggerError, TaggerModel, TrainConfig};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("training data: {0}")]
    Train(#[from] TaggerError),
    #[error(transparent)]
    Corrupt(#[from] CorruptError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error("results csv line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Grid specification: which strategies at which quality levels, over which
/// seeds, plus optional combined `(sentence_keep, label_keep)` cells.
#[derive(Debug, Clone)]
pub struct ExperimentGrid {
    pub strategies: Vec<Strategy>,
    /// Quality levels in [0, 1]; must include 1.0 (the normalization cell).
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Independent sentence-capping repetitions per (level, seed).
    pub permutations: u32,
    /// Combined quantity-times-quality cells; when non-empty, must include
    /// (1.0, 1.0).
    pub combined: Vec<(f64, f64)>,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        ExperimentGrid {
            strategies: vec![
                Strategy::CapSentences,
                Strategy::CapLabels,
                Strategy::SwapLabels,
            ],
            levels: vec![1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1],
            seeds: vec![1, 2, 3],
            permutations: 3,
            combined: Vec::new(),
        }
    }
}

impl ExperimentGrid {
    fn validate(&self) -> Result<(), ExperimentError> {
        if self.seeds.is_empty() {
            return Err(ExperimentError::InvalidGrid("no seeds".into()));
        }
        if self.strategies.is_empty() && self.combined.is_empty() {
            return Err(ExperimentError::InvalidGrid(
                "no strategies and no combined cells".into(),
            ));
        }
        if !self.strategies.is_empty() {
            if self.levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
                return Err(ExperimentError::InvalidGrid(
                    "levels must lie in [0, 1]".into(),
                ));
            }
            if !self.levels.contains(&1.0) {
                return Err(ExperimentError::InvalidGrid(
                    "levels must include 1.0 for normalization".into(),
                ));
            }
        }
        if !self.combined.is_empty() {
            if self
                .combined
                .iter()
                .any(|(s, l)| !(0.0..=1.0).contains(s) || !(0.0..=1.0).contains(l))
            {
                return Err(ExperimentError::InvalidGrid(
                    "combined fractions must lie in [0, 1]".into(),
                ));
            }
            if !self.combined.contains(&(1.0, 1.0)) {
                return Err(ExperimentError::InvalidGrid(
                    "combined cells must include (1.0, 1.0) for normalization".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One grid cell's outcome. Failed cells carry a non-empty `error` instead of
/// aborting the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// `cap-sentences`, `cap-labels`, `swap-labels`, or `combined`.
    pub strategy: String,
    /// Shared quality axis (keep fraction; for swapping, 1 - corrupt).
    /// Combined rows use `sentence_keep`/`label_keep` instead.
    pub level: Option<f64>,
    pub sentence_keep: Option<f64>,
    pub label_keep: Option<f64>,
    pub swap_fraction: Option<f64>,
    pub seed: u64,
    pub permutation: u32,
    pub raw_f1: Option<f64>,
    pub baseline_f1: Option<f64>,
    pub normalized_f1: Option<f64>,
    pub spans_total: Option<usize>,
    pub spans_affected: Option<usize>,
    pub train_sentences: Option<usize>,
    pub error: String,
}

/// All rows of one run, in deterministic grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
}

impl ExperimentResult {
    pub fn to_csv(&self) -> String {
        results_to_csv(self)
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<(), ExperimentError> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    Single {
        strategy: Strategy,
        level: f64,
        seed: u64,
        permutation: u32,
    },
    Combined {
        sentence_keep: f64,
        label_keep: f64,
        seed: u64,
    },
}

const COMBINED_SEED_TAG: u64 = 4;

struct Baseline {
    f1: f64,
    spans_total: usize,
    train_sentences: usize,
}

/// Runs the full grid. `cfg.seed` is ignored: each cell trains with its grid
/// seed so that runs are comparable across strategies.
pub fn run_grid(
    train: &Dataset,
    test: &Dataset,
    grid: &ExperimentGrid,
    cfg: &TrainConfig,
) -> Result<ExperimentResult, ExperimentError> {
    grid.validate()?;
    if train.sentences.is_empty() || test.sentences.is_empty() {
        return Err(ExperimentError::InvalidGrid(
            "train and test datasets must be non-empty".into(),
        ));
    }
    // Level-1.0 corruptions must be exact identities for baseline sharing,
    // which requires BIO2-valid input.
    if !train.is_valid_bio() || !test.is_valid_bio() {
        return Err(ExperimentError::Train(TaggerError::InvalidBio));
    }

    let total_spans = extract_spans(train)?.len();
    let train_sentences = train.sentences.len();

    let baselines: HashMap<u64, Baseline> = grid
        .seeds
        .par_iter()
        .map(|&seed| {
            let model = TaggerModel::train(
                train,
                &TrainConfig {
                    epochs: cfg.epochs,
                    seed,
                    averaged: cfg.averaged,
                },
            )?;
            let predicted = model.predict(test)?;
            let report = score(test, &predicted)?;
            Ok((
                seed,
                Baseline {
                    f1: report.micro.f1,
                    spans_total: total_spans,
                    train_sentences,
                },
            ))
        })
        .collect::<Result<_, ExperimentError>>()?;

    let mut cells: Vec<Cell> = Vec::new();
    for &strategy in &grid.strategies {
        let permutations = match strategy {
            Strategy::CapSentences => grid.permutations.max(1),
            _ => 1,
        };
        for &level in &grid.levels {
            for &seed in &grid.seeds {
                for permutation in 0..permutations {
                    cells.push(Cell::Single {
                        strategy,
                        level,
                        seed,
                        permutation,
                    });
                }
            }
        }
    }
    for &(sentence_keep, label_keep) in &grid.combined {
        for &seed in &grid.seeds {
            cells.push(Cell::Combined {
                sentence_keep,
                label_keep,
                seed,
            });
        }
    }

    let rows: Vec<ResultRow> = cells
        .par_iter()
        .map(|cell| run_cell(train, test, cfg, &baselines, *cell))
        .collect();

    Ok(ExperimentResult { rows })
}

/// Runs only combined `(sentence_keep, label_keep)` cells, normalized against
/// the (1.0, 1.0) cell per seed.
pub fn run_combined_matrix(
    train: &Dataset,
    test: &Dataset,
    pairs: &[(f64, f64)],
    seeds: &[u64],
    cfg: &TrainConfig,
) -> Result<ExperimentResult, ExperimentError> {
    let grid = ExperimentGrid {
        strategies: Vec::new(),
        levels: Vec::new(),
        seeds: seeds.to_vec(),
        permutations: 1,
        combined: pairs.to_vec(),
    };
    run_grid(train, test, &grid, cfg)
}

fn run_cell(
    train: &Dataset,
    test: &Dataset,
    cfg: &TrainConfig,
    baselines: &HashMap<u64, Baseline>,
    cell: Cell,
) -> ResultRow {
    let (seed, mut row) = match cell {
        Cell::Single {
            strategy,
            level,
            seed,
            permutation,
        } => {
            let (sentence_keep, label_keep, swap_fraction) = match strategy {
                Strategy::CapSentences => (Some(level), None, None),
                Strategy::CapLabels => (None, Some(level), None),
                Strategy::SwapLabels => (None, None, Some(1.0 - level)),
            };
            (
                seed,
                ResultRow {
                    strategy: strategy.name().to_string(),
                    level: Some(level),
                    sentence_keep,
                    label_keep,
                    swap_fraction,
                    seed,
                    permutation,
                    raw_f1: None,
                    baseline_f1: None,
                    normalized_f1: None,
                    spans_total: None,
                    spans_affected: None,
                    train_sentences: None,
                    error: String::new(),
                },
            )
        }
        Cell::Combined {
            sentence_keep,
            label_keep,
            seed,
        } => (
            seed,
            ResultRow {
                strategy: "combined".to_string(),
                level: None,
                sentence_keep: Some(sentence_keep),
                label_keep: Some(label_keep),
                swap_fraction: None,
                seed,
                permutation: 0,
                raw_f1: None,
                baseline_f1: None,
                normalized_f1: None,
                spans_total: None,
                spans_affected: None,
                train_sentences: None,
                error: String::new(),
            },
        ),
    };

    let baseline = &baselines[&seed];
    row.baseline_f1 = Some(baseline.f1);

    let is_identity = match cell {
        Cell::Single { level, .. } => level == 1.0,
        Cell::Combined {
            sentence_keep,
            label_keep,
            ..
        } => sentence_keep == 1.0 && label_keep == 1.0,
    };

    if is_identity {
        row.raw_f1 = Some(baseline.f1);
        row.spans_total = Some(baseline.spans_total);
        row.spans_affected = Some(0);
        row.train_sentences = Some(baseline.train_sentences);
        if baseline.f1 > 0.0 {
            row.normalized_f1 = Some(1.0);
        } else {
            row.error = "zero-baseline".to_string();
        }
        return row;
    }

    let corrupted = match cell {
        Cell::Single {
            strategy,
            level,
            seed,
            permutation,
        } => {
            let cell_seed = derive_seed(seed, &[strategy.id(), level.to_bits(), permutation as u64]);
            match strategy {
                Strategy::CapSentences => cap_sentences(train, level, cell_seed),
                Strategy::CapLabels => cap_labels(train, level, cell_seed),
                Strategy::SwapLabels => swap_labels(train, 1.0 - level, cell_seed),
            }
        }
        Cell::Combined {
            sentence_keep,
            label_keep,
            seed,
        } => {
            let cell_seed = derive_seed(
                seed,
                &[COMBINED_SEED_TAG, sentence_keep.to_bits(), label_keep.to_bits()],
            );
            compose_quantity_quality(train, sentence_keep, label_keep, cell_seed)
        }
    };
    let corrupted = match corrupted {
        Ok(d) => d,
        Err(e) => {
            row.error = format!("corruption: {e}");
            return row;
        }
    };

    row.train_sentences = Some(corrupted.sentences.len());
    match extract_spans(&corrupted) {
        Ok(index) => row.spans_total = Some(index.len()),
        Err(e) => {
            row.error = format!("span extraction: {e}");
            return row;
        }
    }
    match count_affected_spans(train, &corrupted) {
        Ok(n) => row.spans_affected = Some(n),
        Err(e) => {
            row.error = format!("span diff: {e}");
            return row;
        }
    }

    let model = match TaggerModel::train(
        &corrupted,
        &TrainConfig {
            epochs: cfg.epochs,
            seed,
            averaged: cfg.averaged,
        },
    ) {
        Ok(m) => m,
        Err(e) => {
            row.error = format!("training: {e}");
            return row;
        }
    };
    let predicted = match model.predict(test) {
        Ok(p) => p,
        Err(e) => {
            row.error = format!("prediction: {e}");
            return row;
        }
    };
    let report = match score(test, &predicted) {
        Ok(r) => r,
        Err(e) => {
            row.error = format!("scoring: {e}");
            return row;
        }
    };
    row.raw_f1 = Some(report.micro.f1);
    if baseline.f1 > 0.0 {
        row.normalized_f1 = Some(report.micro.f1 / baseline.f1);
    } else {
        row.error = "zero-baseline".to_string();
    }
    row
}

/// Mean and sample standard deviation of `normalized_f1` per grid group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub strategy: String,
    pub level: Option<f64>,
    pub sentence_keep: Option<f64>,
    pub label_keep: Option<f64>,
    pub mean_normalized_f1: f64,
    /// Sample standard deviation; 0 when n == 1.
    pub sample_stddev: f64,
    pub n: usize,
}

// Grouping key: strategy plus the bit patterns of level / sentence_keep /
// label_keep (bit patterns so the key is hashable).
type GroupKey = (String, Option<u64>, Option<u64>, Option<u64>);

/// Groups rows by (strategy, level) — or the combined pair — averaging over
/// seeds and permutations. Rows flagged with an error are skipped.
pub fn aggregate(result: &ExperimentResult) -> Vec<SummaryRow> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut groups: HashMap<GroupKey, Vec<f64>> = HashMap::new();
    for row in &result.rows {
        let Some(value) = row.normalized_f1 else {
            continue;
        };
        if !row.error.is_empty() {
            continue;
        }
        let key = (
            row.strategy.clone(),
            row.level.map(f64::to_bits),
            row.sentence_keep.map(f64::to_bits),
            row.label_keep.map(f64::to_bits),
        );
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(value);
    }

    order
        .into_iter()
        .map(|key| {
            let values = &groups[&key];
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let stddev = if n > 1 {
                let var =
                    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
                var.sqrt()
            } else {
                0.0
            };
            SummaryRow {
                strategy: key.0,
                level: key.1.map(f64::from_bits),
                sentence_keep: key.2.map(f64::from_bits),
                label_keep: key.3.map(f64::from_bits),
                mean_normalized_f1: mean,
                sample_stddev: stddev,
                n,
            }
        })
        .collect()
}

fn fmt_opt_f64(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn fmt_opt_usize(value: Option<usize>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub const RESULTS_CSV_HEADER: &str = "strategy,sentence_keep,label_keep,swap_fraction,seed,\
permutation,raw_f1,baseline_f1,normalized_f1,spans_total,spans_affected,train_sentences,error";

/// Renders the pinned results-table format. Field values never contain
/// commas, so no quoting is needed.
pub fn results_to_csv(result: &ExperimentResult) -> String {
    let mut out = String::new();
    out.push_str(RESULTS_CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.strategy,
            fmt_opt_f64(row.sentence_keep),
            fmt_opt_f64(row.label_keep),
            fmt_opt_f64(row.swap_fraction),
            row.seed,
            row.permutation,
            fmt_opt_f64(row.raw_f1),
            fmt_opt_f64(row.baseline_f1),
            fmt_opt_f64(row.normalized_f1),
            fmt_opt_usize(row.spans_total),
            fmt_opt_usize(row.spans_affected),
            fmt_opt_usize(row.train_sentences),
            row.error,
        ));
    }
    out
}

/// Parses a results table back into rows, reconstructing each row's quality
/// level from the strategy-specific fraction column.
pub fn parse_results_csv(text: &str) -> Result<ExperimentResult, ExperimentError> {
    let bad = |line: usize, reason: &str| ExperimentError::Csv {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == RESULTS_CSV_HEADER => {}
        _ => return Err(bad(1, "unrecognized header")),
    }

    let parse_f64 = |field: &str, line: usize| -> Result<Option<f64>, ExperimentError> {
        if field.is_empty() {
            Ok(None)
        } else {
            field
                .parse::<f64>()
                .map(Some)
                .map_err(|_| bad(line, "bad float"))
        }
    };
    let parse_usize = |field: &str, line: usize| -> Result<Option<usize>, ExperimentError> {
        if field.is_empty() {
            Ok(None)
        } else {
            field
                .parse::<usize>()
                .map(Some)
                .map_err(|_| bad(line, "bad count"))
        }
    };

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(bad(line_no, "expected 13 fields"));
        }
        let strategy = fields[0].to_string();
        let sentence_keep = parse_f64(fields[1], line_no)?;
        let label_keep = parse_f64(fields[2], line_no)?;
        let swap_fraction = parse_f64(fields[3], line_no)?;
        let level = match strategy.as_str() {
            "cap-sentences" => sentence_keep,
            "cap-labels" => label_keep,
            "swap-labels" => swap_fraction.map(|f| 1.0 - f),
            _ => None,
        };
        rows.push(ResultRow {
            strategy,
            level,
            sentence_keep,
            label_keep,
            swap_fraction,
            seed: fields[4].parse().map_err(|_| bad(line_no, "bad seed"))?,
            permutation: fields[5]
                .parse()
                .map_err(|_| bad(line_no, "bad permutation"))?,
            raw_f1: parse_f64(fields[6], line_no)?,
            baseline_f1: parse_f64(fields[7], line_no)?,
            normalized_f1: parse_f64(fields[8], line_no)?,
            spans_total: parse_usize(fields[9], line_no)?,
            spans_affected: parse_usize(fields[10], line_no)?,
            train_sentences: parse_usize(fields[11], line_no)?,
            error: fields[12].to_string(),
        });
    }
    Ok(ExperimentResult { rows })
}

/// Long-format table of per-strategy quality curves, pooled over everything
/// else: `strategy,level,mean_normalized_f1,stddev,n`.
pub fn fig_quality_curves_csv(results: &[(String, ExperimentResult)]) -> String {
    let mut merged = ExperimentResult { rows: Vec::new() };
    for (_, result) in results {
        merged
            .rows
            .extend(result.rows.iter().filter(|r| r.strategy != "combined").cloned());
    }
    let mut out = String::from("strategy,level,mean_normalized_f1,stddev,n\n");
    for row in aggregate(&merged) {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.strategy,
            fmt_opt_f64(row.level),
            row.mean_normalized_f1,
            row.sample_stddev,
            row.n
        ));
    }
    out
}

/// Same curves, kept separate per labeled input:
/// `language,strategy,level,mean_normalized_f1,stddev,n`.
pub fn fig_by_language_csv(results: &[(String, ExperimentResult)]) -> String {
    let mut out = String::from("language,strategy,level,mean_normalized_f1,stddev,n\n");
    for (label, result) in results {
        let single = ExperimentResult {
            rows: result
                .rows
                .iter()
                .filter(|r| r.strategy != "combined")
                .cloned()
                .collect(),
        };
        for row in aggregate(&single) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                label,
                row.strategy,
                fmt_opt_f64(row.level),
                row.mean_normalized_f1,
                row.sample_stddev,
                row.n
            ));
        }
    }
    out
}

/// Combined-matrix cells in long format:
/// `language,sentence_keep,label_keep,mean_normalized_f1,stddev,n`.
pub fn fig_matrix_csv(results: &[(String, ExperimentResult)]) -> String {
    let mut out = String::from("language,sentence_keep,label_keep,mean_normalized_f1,stddev,n\n");
    for (label, result) in results {
        let combined = ExperimentResult {
            rows: result
                .rows
                .iter()
                .filter(|r| r.strategy == "combined")
                .cloned()
                .collect(),
        };
        for row in aggregate(&combined) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                label,
                fmt_opt_f64(row.sentence_keep),
                fmt_opt_f64(row.label_keep),
                row.mean_normalized_f1,
                row.sample_stddev,
                row.n
            ));
        }
    }
    out
}
