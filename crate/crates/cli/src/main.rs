//! `nerlab` — corpus laboratory for BIO-tagged NER data.
//!
//! Subcommands: `stats`, `corrupt`, `score`, `train`, `predict`,
//! `experiment`, `report`. Each is a thin shell over the library; all
//! behavior is reachable (and tested) through `nerlab-core` directly.
//!
//! Exit codes: 0 success, 1 domain error (JSON error object on stderr under
//! `--json`), 2 usage error.

mod output;

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nerlab_core::conll::{
    parse_conll, serialize_conll, BioPolicy, Dataset, ParseOptions, TagSchemeConfig,
};
use nerlab_core::corrupt::{
    compose_quantity_quality, count_affected_spans, CorruptionSpec, Strategy,
};
use nerlab_core::experiment::{
    fig_by_language_csv, fig_matrix_csv, fig_quality_curves_csv, parse_results_csv, run_grid,
    ExperimentGrid, ExperimentResult,
};
use nerlab_core::scoring::{normalize, score};
use nerlab_core::span::extract_spans;
use nerlab_core::stats::compute_stats;
use nerlab_core::tagger::{TaggerModel, TrainConfig};

use output::{write_sidecar, CliError, TOOL_VERSION};

const SEED_ENV: &str = "NERLAB_SEED";

#[derive(Parser)]
#[command(
    name = "nerlab",
    version,
    about = "Corpus laboratory for BIO-tagged NER data: statistics, seeded corruption, \
             entity-level scoring, a baseline tagger, and corruption-grid experiments"
)]
struct Cli {
    /// Entity types of the tag scheme, comma-separated.
    #[arg(long, global = true, value_name = "LIST", default_value = "PER,ORG,LOC,DATE")]
    entity_types: String,

    /// How BIO violations in input files are handled.
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Repair)]
    bio_policy: PolicyArg,

    /// 0-based tag column (default: last column).
    #[arg(long, global = true, value_name = "N")]
    tag_column: Option<usize>,

    /// Drop lines whose first column is -DOCSTART-.
    #[arg(long, global = true)]
    drop_docstart: bool,

    /// Skip lines starting with '#'.
    #[arg(long, global = true)]
    skip_comments: bool,

    /// Machine-readable output: JSON reports on stdout, JSON errors on stderr.
    #[arg(long, global = true)]
    json: bool,

    /// Echo the resolved configuration to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Strict,
    Repair,
    Permissive,
}

impl From<PolicyArg> for BioPolicy {
    fn from(value: PolicyArg) -> BioPolicy {
        match value {
            PolicyArg::Strict => BioPolicy::Strict,
            PolicyArg::Repair => BioPolicy::Repair,
            PolicyArg::Permissive => BioPolicy::Permissive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    CapSentences,
    CapLabels,
    SwapLabels,
}

impl From<StrategyArg> for Strategy {
    fn from(value: StrategyArg) -> Strategy {
        match value {
            StrategyArg::CapSentences => Strategy::CapSentences,
            StrategyArg::CapLabels => Strategy::CapLabels,
            StrategyArg::SwapLabels => Strategy::SwapLabels,
        }
    }
}

fn parse_fraction(raw: &str) -> Result<f64, String> {
    let value: f64 = raw.parse().map_err(|_| format!("{raw:?} is not a number"))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("{value} is outside [0, 1]"));
    }
    Ok(value)
}

/// One `S:L` pair, e.g. `0.25:1.0`.
fn parse_pair(raw: &str) -> Result<(f64, f64), String> {
    let (s, l) = raw
        .split_once(':')
        .ok_or_else(|| format!("{raw:?} is not SENTENCE:LABEL"))?;
    Ok((parse_fraction(s.trim())?, parse_fraction(l.trim())?))
}

#[derive(Subcommand)]
enum Command {
    /// Corpus statistics: sentences, tokens, entities, density.
    Stats {
        /// Input CoNLL file.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Force the plain-text table even under --json.
        #[arg(long)]
        table: bool,
    },
    /// Apply one corruption strategy, or the combined quantity-quality form.
    #[command(group(ArgGroup::new("mode").required(true).args(["strategy", "sentence_keep"])))]
    Corrupt {
        /// Single-strategy corruption.
        #[arg(long, value_enum, requires = "fraction")]
        strategy: Option<StrategyArg>,
        /// Keep fraction (cap-sentences, cap-labels) or corrupt fraction
        /// (swap-labels), in [0, 1].
        #[arg(long, value_parser = parse_fraction, requires = "strategy")]
        fraction: Option<f64>,
        /// Combined corruption: fraction of sentences to keep.
        #[arg(long, value_parser = parse_fraction, requires = "label_keep")]
        sentence_keep: Option<f64>,
        /// Combined corruption: fraction of remaining labels to keep.
        #[arg(long, value_parser = parse_fraction, requires = "sentence_keep")]
        label_keep: Option<f64>,
        /// Corruption seed (default: $NERLAB_SEED or 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
    },
    /// Entity-level precision/recall/F1 of a prediction file against gold.
    Score {
        #[arg(long, value_name = "FILE")]
        gold: PathBuf,
        #[arg(long, value_name = "FILE")]
        pred: PathBuf,
        /// Also print raw/baseline normalization given a baseline prediction file.
        #[arg(long, value_name = "FILE")]
        baseline_pred: Option<PathBuf>,
    },
    /// Train the averaged perceptron tagger.
    Train {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Output model path (versioned text format).
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        /// Epoch-shuffling seed (default: $NERLAB_SEED or 1).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tag a file with a trained model.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
    },
    /// Run a corruption grid: corrupt train data, train, score, normalize.
    Experiment {
        #[arg(long, value_name = "FILE")]
        train: PathBuf,
        #[arg(long, value_name = "FILE")]
        test: PathBuf,
        /// Strategies to run (default: all three).
        #[arg(long, value_delimiter = ',', value_enum)]
        strategies: Option<Vec<StrategyArg>>,
        /// Quality levels, comma-separated; must include 1.0.
        #[arg(
            long,
            value_parser = parse_fraction,
            value_delimiter = ',',
            default_value = "1.0,0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1"
        )]
        levels: Vec<f64>,
        /// Training/corruption seeds (default: $NERLAB_SEED-derived or 1,2,3).
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Sentence-capping repetitions per (level, seed).
        #[arg(long, default_value_t = 3)]
        permutations: u32,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        /// Combined matrix cells as SENTENCE:LABEL pairs, comma-separated;
        /// must include 1.0:1.0.
        #[arg(long, value_parser = parse_pair, value_delimiter = ',', value_name = "PAIRS")]
        matrix: Option<Vec<(f64, f64)>>,
        /// Worker threads for grid cells (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long = "out", value_name = "FILE", default_value = "results.csv")]
        output: PathBuf,
    },
    /// Emit figure-ready long-format CSVs from results tables.
    Report {
        /// Results files, optionally labeled: [LANG=]results.csv.
        #[arg(long, value_name = "[LANG=]FILE", required = true, num_args = 1..)]
        results: Vec<String>,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let machine_readable = cli.json;
    match run(cli) {
        Ok(()) => {}
        Err(err) => std::process::exit(err.report(machine_readable)),
    }
}

fn seed_from_env() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|s| s.parse().ok())
}

struct Ctx {
    scheme: TagSchemeConfig,
    options: ParseOptions,
    json: bool,
    verbose: bool,
}

impl Ctx {
    fn config_json(&self) -> Value {
        json!({
            "entity_types": self.scheme.entity_types,
            "bio_policy": self.scheme.bio_policy,
            "tag_column": self.options.tag_column,
            "drop_docstart": self.options.drop_docstart,
            "skip_comments": self.options.skip_comments,
        })
    }

    fn load(&self, path: &Path) -> Result<Dataset, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, &e))?;
        let parsed = parse_conll(&bytes, &self.scheme, &self.options)?;
        if self.verbose && parsed.repairs > 0 {
            eprintln!(
                "{}: repaired {} orphan I- tag(s)",
                path.display(),
                parsed.repairs
            );
        }
        Ok(parsed.dataset)
    }

    fn write(&self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(path, bytes).map_err(|e| CliError::io(path, &e))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let entity_types: Vec<String> = cli
        .entity_types
        .split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect();
    let scheme = TagSchemeConfig::new(entity_types, cli.bio_policy.into())?;
    let ctx = Ctx {
        scheme,
        options: ParseOptions {
            tag_column: cli.tag_column,
            drop_docstart: cli.drop_docstart,
            skip_comments: cli.skip_comments,
        },
        json: cli.json,
        verbose: cli.verbose,
    };
    if ctx.verbose {
        eprintln!("nerlab {TOOL_VERSION} config: {}", ctx.config_json());
    }

    match cli.command {
        Command::Stats { input, table } => cmd_stats(&ctx, &input, table),
        Command::Corrupt {
            strategy,
            fraction,
            sentence_keep,
            label_keep,
            seed,
            input,
            output,
        } => cmd_corrupt(
            &ctx,
            strategy.map(Into::into),
            fraction,
            sentence_keep.zip(label_keep),
            seed.or_else(seed_from_env).unwrap_or(0),
            &input,
            &output,
        ),
        Command::Score {
            gold,
            pred,
            baseline_pred,
        } => cmd_score(&ctx, &gold, &pred, baseline_pred.as_deref()),
        Command::Train {
            input,
            model,
            epochs,
            seed,
        } => cmd_train(
            &ctx,
            &input,
            &model,
            epochs,
            seed.or_else(seed_from_env).unwrap_or(1),
        ),
        Command::Predict {
            model,
            input,
            output,
        } => cmd_predict(&ctx, &model, &input, &output),
        Command::Experiment {
            train,
            test,
            strategies,
            levels,
            seeds,
            permutations,
            epochs,
            matrix,
            jobs,
            output,
        } => {
            let seeds = seeds.unwrap_or_else(|| {
                let root = seed_from_env().unwrap_or(1);
                vec![root, root.wrapping_add(1), root.wrapping_add(2)]
            });
            cmd_experiment(
                &ctx,
                &train,
                &test,
                strategies,
                levels,
                seeds,
                permutations,
                epochs,
                matrix,
                jobs,
                &output,
            )
        }
        Command::Report { results, out_dir } => cmd_report(&ctx, &results, &out_dir),
    }
}

fn cmd_stats(ctx: &Ctx, input: &Path, force_table: bool) -> Result<(), CliError> {
    let dataset = ctx.load(input)?;
    let report = compute_stats(&dataset)?;
    if ctx.json && !force_table {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    Ok(())
}

fn cmd_corrupt(
    ctx: &Ctx,
    strategy: Option<Strategy>,
    fraction: Option<f64>,
    combined: Option<(f64, f64)>,
    seed: u64,
    input: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let dataset = ctx.load(input)?;
    let before = extract_spans(&dataset)?.len();

    let (corrupted, details) = match (strategy, fraction, combined) {
        (Some(strategy), Some(fraction), None) => {
            let spec = CorruptionSpec {
                strategy,
                fraction,
                seed,
            };
            let corrupted = spec.apply(&dataset)?;
            (
                corrupted,
                json!({ "strategy": strategy.name(), "fraction": fraction, "seed": seed }),
            )
        }
        (None, None, Some((sentence_keep, label_keep))) => {
            let corrupted = compose_quantity_quality(&dataset, sentence_keep, label_keep, seed)?;
            (
                corrupted,
                json!({
                    "strategy": "combined",
                    "sentence_keep": sentence_keep,
                    "label_keep": label_keep,
                    "seed": seed,
                }),
            )
        }
        // clap's arg group guarantees exactly one mode
        _ => unreachable!("argument parsing enforces the corruption mode"),
    };

    let after = extract_spans(&corrupted)?.len();
    let affected = count_affected_spans(&dataset, &corrupted)?;
    ctx.write(output, &serialize_conll(&corrupted))?;

    let mut sidecar = details;
    if let Some(map) = sidecar.as_object_mut() {
        map.insert("spans_total".into(), json!(after));
        map.insert("spans_affected".into(), json!(affected));
        map.insert("spans_input".into(), json!(before));
    }
    write_sidecar(output, "corrupt", ctx.config_json(), sidecar)?;
    if ctx.verbose {
        eprintln!(
            "wrote {} ({} spans kept, {} affected)",
            output.display(),
            after,
            affected
        );
    }
    Ok(())
}

fn cmd_score(
    ctx: &Ctx,
    gold_path: &Path,
    pred_path: &Path,
    baseline_pred: Option<&Path>,
) -> Result<(), CliError> {
    let gold = ctx.load(gold_path)?;
    let pred = ctx.load(pred_path)?;
    let report = score(&gold, &pred)?;
    if ctx.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    if let Some(baseline_path) = baseline_pred {
        let baseline = score(&gold, &ctx.load(baseline_path)?)?;
        let normalized = normalize(&report, &baseline)?;
        if ctx.json {
            println!("{}", json!(normalized));
        } else {
            println!(
                "normalized: {} (raw {} / baseline {})",
                normalized.normalized, normalized.raw_f1, normalized.baseline_f1
            );
        }
    }
    Ok(())
}

fn cmd_train(
    ctx: &Ctx,
    input: &Path,
    model_path: &Path,
    epochs: usize,
    seed: u64,
) -> Result<(), CliError> {
    let dataset = ctx.load(input)?;
    let cfg = TrainConfig {
        epochs,
        seed,
        averaged: true,
    };
    let model = TaggerModel::train(&dataset, &cfg)?;
    model.save(model_path)?;
    write_sidecar(
        model_path,
        "train",
        ctx.config_json(),
        json!({
            "epochs": epochs,
            "seed": seed,
            "train_file": input.display().to_string(),
            "corpus_sha256": model.training_corpus_hash,
        }),
    )?;
    Ok(())
}

fn cmd_predict(ctx: &Ctx, model_path: &Path, input: &Path, output: &Path) -> Result<(), CliError> {
    let model = TaggerModel::load(model_path)?;
    // Parse under the model's scheme so its tag inventory applies; the input
    // tags themselves are ignored.
    let scheme = TagSchemeConfig::new(
        model.scheme().entity_types.clone(),
        ctx.scheme.bio_policy,
    )?;
    let bytes = std::fs::read(input).map_err(|e| CliError::io(input, &e))?;
    let dataset = parse_conll(&bytes, &scheme, &ctx.options)?.dataset;
    let predicted = model.predict(&dataset)?;
    ctx.write(output, &serialize_conll(&predicted))?;
    write_sidecar(
        output,
        "predict",
        ctx.config_json(),
        json!({
            "model": model_path.display().to_string(),
            "model_corpus_sha256": model.training_corpus_hash,
            "input": input.display().to_string(),
        }),
    )?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    ctx: &Ctx,
    train_path: &Path,
    test_path: &Path,
    strategies: Option<Vec<StrategyArg>>,
    levels: Vec<f64>,
    seeds: Vec<u64>,
    permutations: u32,
    epochs: usize,
    matrix: Option<Vec<(f64, f64)>>,
    jobs: usize,
    output: &Path,
) -> Result<(), CliError> {
    if jobs > 0 {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let train = ctx.load(train_path)?;
    let test = ctx.load(test_path)?;

    // --matrix alone runs only combined cells; with --strategies both run.
    let combined = matrix.unwrap_or_default();
    let strategies: Vec<Strategy> = match strategies {
        Some(list) => list.into_iter().map(Into::into).collect(),
        None if !combined.is_empty() => Vec::new(),
        None => vec![
            Strategy::CapSentences,
            Strategy::CapLabels,
            Strategy::SwapLabels,
        ],
    };
    let grid = ExperimentGrid {
        strategies: strategies.clone(),
        levels: levels.clone(),
        seeds: seeds.clone(),
        permutations,
        combined: combined.clone(),
    };
    let cfg = TrainConfig {
        epochs,
        seed: 0,
        averaged: true,
    };
    let result = run_grid(&train, &test, &grid, &cfg)?;
    result.write_csv(output)?;
    write_sidecar(
        output,
        "experiment",
        ctx.config_json(),
        json!({
            "train": train_path.display().to_string(),
            "test": test_path.display().to_string(),
            "strategies": strategies.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "levels": levels,
            "seeds": seeds,
            "permutations": permutations,
            "epochs": epochs,
            "matrix": combined,
            "rows": result.rows.len(),
        }),
    )?;
    if ctx.verbose {
        eprintln!("wrote {} ({} rows)", output.display(), result.rows.len());
    }
    Ok(())
}

fn cmd_report(ctx: &Ctx, results: &[String], out_dir: &Path) -> Result<(), CliError> {
    let mut labeled: Vec<(String, ExperimentResult)> = Vec::new();
    for entry in results {
        let (label, path) = match entry.split_once('=') {
            Some((label, path)) => (label.to_string(), PathBuf::from(path)),
            None => {
                let path = PathBuf::from(entry);
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| entry.clone());
                (label, path)
            }
        };
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, &e))?;
        labeled.push((label, parse_results_csv(&text)?));
    }

    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, &e))?;
    let outputs = [
        ("fig2.csv", fig_quality_curves_csv(&labeled)),
        ("fig3_by_language.csv", fig_by_language_csv(&labeled)),
        ("fig4_matrix.csv", fig_matrix_csv(&labeled)),
    ];
    for (name, content) in &outputs {
        let path = out_dir.join(name);
        ctx.write(&path, content.as_bytes())?;
    }
    write_sidecar(
        &out_dir.join("report"),
        "report",
        ctx.config_json(),
        json!({
            "inputs": results,
            "outputs": outputs.iter().map(|(n, _)| n.to_string()).collect::<Vec<_>>(),
        }),
    )?;
    if ctx.verbose {
        eprintln!("wrote figure tables into {}", out_dir.display());
    }
    Ok(())
}
