//! End-to-end tests of the `nerlab` binary over the bundled synthetic
//! fixtures. Each subcommand must behave as a thin shell: where an output
//! format is owned by the library, the CLI's bytes must equal the library's
//! bytes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nerlab_core::conll::{parse_conll, serialize_conll, ParseOptions, TagSchemeConfig};
use nerlab_core::corrupt::{cap_labels, exact_count};
use nerlab_core::stats::compute_stats;

const TRAIN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synth_train.conll");
const TEST: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synth_test.conll");

fn nerlab(args: &[&str]) -> Output {
    nerlab_env(args, &[])
}

fn nerlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nerlab"));
    cmd.args(args);
    cmd.env_remove("NERLAB_SEED");
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn train_dataset() -> nerlab_core::conll::Dataset {
    let bytes = std::fs::read(TRAIN).unwrap();
    parse_conll(&bytes, &TagSchemeConfig::default(), &ParseOptions::default())
        .unwrap()
        .dataset
}

#[test]
fn missing_input_exits_one_and_names_the_path() {
    let output = nerlab(&["stats", "--in", "/no/such/file.conll"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("/no/such/file.conll"));
}

#[test]
fn out_of_range_fraction_is_a_usage_error() {
    let output = nerlab(&[
        "corrupt",
        "--strategy",
        "cap-labels",
        "--fraction",
        "1.5",
        "--seed",
        "1",
        "--in",
        TRAIN,
        "--out",
        "/tmp/never-written.conll",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn corrupt_requires_exactly_one_mode() {
    let missing_mode = nerlab(&["corrupt", "--seed", "1", "--in", TRAIN, "--out", "/tmp/x"]);
    assert_eq!(missing_mode.status.code(), Some(2));

    let both_modes = nerlab(&[
        "corrupt",
        "--strategy",
        "cap-labels",
        "--fraction",
        "0.5",
        "--sentence-keep",
        "0.5",
        "--label-keep",
        "0.5",
        "--seed",
        "1",
        "--in",
        TRAIN,
        "--out",
        "/tmp/x",
    ]);
    assert_eq!(both_modes.status.code(), Some(2));
}

#[test]
fn json_errors_follow_the_stable_schema() {
    let output = nerlab(&["--json", "stats", "--in", "/no/such/file.conll"]);
    assert_eq!(output.status.code(), Some(1));
    let payload: serde_json::Value = serde_json::from_str(stderr(&output).trim()).unwrap();
    assert_eq!(payload["code"], "io");
    assert!(payload["message"].as_str().unwrap().contains("file.conll"));
    assert_eq!(payload["context"]["path"], "/no/such/file.conll");
}

#[test]
fn stats_json_is_byte_identical_to_the_library() {
    let output = nerlab(&["--json", "stats", "--in", TRAIN]);
    assert_eq!(output.status.code(), Some(0));
    let expected = compute_stats(&train_dataset()).unwrap().to_json();
    assert_eq!(stdout(&output), expected);
}

#[test]
fn corrupt_matches_library_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.conll");
    let out_b = dir.path().join("b.conll");
    for out in [&out_a, &out_b] {
        let output = nerlab(&[
            "corrupt",
            "--strategy",
            "cap-labels",
            "--fraction",
            "0.4",
            "--seed",
            "9",
            "--in",
            TRAIN,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    }
    let bytes_a = std::fs::read(&out_a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&out_b).unwrap());

    let expected = serialize_conll(&cap_labels(&train_dataset(), 0.4, 9).unwrap());
    assert_eq!(bytes_a, expected);

    // sidecar records the exact-count bookkeeping
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_a.with_file_name("a.conll.json")).unwrap())
            .unwrap();
    let total = sidecar["spans_input"].as_u64().unwrap() as usize;
    let kept = exact_count(0.4, total);
    assert_eq!(sidecar["strategy"], "cap-labels");
    assert_eq!(sidecar["seed"], 9);
    assert_eq!(sidecar["spans_total"].as_u64().unwrap() as usize, kept);
    assert_eq!(
        sidecar["spans_affected"].as_u64().unwrap() as usize,
        total - kept
    );
    assert_eq!(sidecar["tool"], "nerlab");
    assert!(sidecar["config"]["entity_types"].is_array());
}

#[test]
fn corrupt_seed_defaults_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let flagged = dir.path().join("flagged.conll");
    let from_env = dir.path().join("env.conll");
    let args = |out: &Path| {
        vec![
            "corrupt".to_string(),
            "--strategy".into(),
            "swap-labels".into(),
            "--fraction".into(),
            "0.5".into(),
            "--in".into(),
            TRAIN.to_string(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let mut with_seed = args(&flagged);
    with_seed.insert(1, "--seed".into());
    with_seed.insert(2, "123".into());
    let refs: Vec<&str> = with_seed.iter().map(String::as_str).collect();
    assert_eq!(nerlab(&refs).status.code(), Some(0));

    let env_args = args(&from_env);
    let refs: Vec<&str> = env_args.iter().map(String::as_str).collect();
    assert_eq!(
        nerlab_env(&refs, &[("NERLAB_SEED", "123")]).status.code(),
        Some(0)
    );
    assert_eq!(
        std::fs::read(&flagged).unwrap(),
        std::fs::read(&from_env).unwrap()
    );
}

#[test]
fn train_predict_score_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.txt");
    let pred = dir.path().join("pred.conll");

    let output = nerlab(&[
        "train",
        "--in",
        TRAIN,
        "--model",
        model.to_str().unwrap(),
        "--epochs",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let model_text = std::fs::read_to_string(&model).unwrap();
    assert!(model_text.starts_with("nerlab-model v1\n"));
    assert!(model.with_file_name("model.txt.json").exists());

    let output = nerlab(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--in",
        TEST,
        "--out",
        pred.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let predicted = parse_conll(
        &std::fs::read(&pred).unwrap(),
        &TagSchemeConfig::default(),
        &ParseOptions::default(),
    )
    .unwrap()
    .dataset;
    assert!(predicted.is_valid_bio());

    let output = nerlab(&[
        "--json",
        "score",
        "--gold",
        TEST,
        "--pred",
        pred.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let f1 = report["micro"]["f1"].as_f64().unwrap();
    assert!(f1 > 0.9, "pipeline micro F1 {f1} unexpectedly low");
}

#[test]
fn default_experiment_on_bundled_fixture_writes_normalized_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.csv");
    let output = nerlab(&[
        "experiment",
        "--train",
        TRAIN,
        "--test",
        TEST,
        "--out",
        results.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let csv = std::fs::read_to_string(&results).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "strategy,sentence_keep,label_keep,swap_fraction,seed,permutation,raw_f1,baseline_f1,\
         normalized_f1,spans_total,spans_affected,train_sentences,error"
    );
    // default grid: 3 strategies x 10 levels x 3 seeds, cap-sentences x3 permutations
    assert_eq!(lines.clone().count(), 90 + 30 + 30);
    let mut saw_baseline = false;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let level_one = match fields[0] {
            "cap-sentences" => fields[1] == "1",
            "cap-labels" => fields[2] == "1",
            "swap-labels" => fields[3] == "0",
            other => panic!("unexpected strategy {other}"),
        };
        if level_one {
            saw_baseline = true;
            assert_eq!(fields[8], "1", "level-1.0 row must normalize to 1: {line}");
        }
    }
    assert!(saw_baseline);
    assert!(results.with_file_name("results.csv.json").exists());
}

#[test]
fn experiment_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args_for = |name: &str| {
        vec![
            "experiment".to_string(),
            "--train".into(),
            TRAIN.into(),
            "--test".into(),
            TEST.into(),
            "--levels".into(),
            "1.0,0.3".into(),
            "--seeds".into(),
            "1,2".into(),
            "--permutations".into(),
            "2".into(),
            "--epochs".into(),
            "3".into(),
            "--jobs".into(),
            "2".into(),
            "--out".into(),
            dir.path().join(name).display().to_string(),
        ]
    };
    for name in ["a.csv", "b.csv"] {
        let args = args_for(name);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let output = nerlab(&refs);
        assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    }
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn experiment_csv_is_byte_identical_to_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.csv");
    let output = nerlab(&[
        "experiment",
        "--train",
        TRAIN,
        "--test",
        TEST,
        "--strategies",
        "cap-labels",
        "--levels",
        "1.0,0.4",
        "--seeds",
        "5",
        "--permutations",
        "1",
        "--epochs",
        "3",
        "--out",
        results.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let test_bytes = std::fs::read(TEST).unwrap();
    let test_data = parse_conll(
        &test_bytes,
        &TagSchemeConfig::default(),
        &ParseOptions::default(),
    )
    .unwrap()
    .dataset;
    let grid = nerlab_core::experiment::ExperimentGrid {
        strategies: vec![nerlab_core::corrupt::Strategy::CapLabels],
        levels: vec![1.0, 0.4],
        seeds: vec![5],
        permutations: 1,
        combined: Vec::new(),
    };
    let cfg = nerlab_core::tagger::TrainConfig {
        epochs: 3,
        seed: 0,
        averaged: true,
    };
    let expected =
        nerlab_core::experiment::run_grid(&train_dataset(), &test_data, &grid, &cfg)
            .unwrap()
            .to_csv();
    assert_eq!(std::fs::read_to_string(&results).unwrap(), expected);
}

#[test]
fn report_emits_the_three_figure_tables() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.csv");
    let output = nerlab(&[
        "experiment",
        "--train",
        TRAIN,
        "--test",
        TEST,
        "--levels",
        "1.0,0.5",
        "--seeds",
        "1",
        "--permutations",
        "1",
        "--epochs",
        "3",
        "--matrix",
        "1.0:1.0,0.5:0.5",
        "--strategies",
        "cap-sentences,cap-labels",
        "--out",
        results.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let report_dir = dir.path().join("figs");
    let output = nerlab(&[
        "report",
        "--results",
        &format!("synth={}", results.display()),
        "--out-dir",
        report_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let fig2 = std::fs::read_to_string(report_dir.join("fig2.csv")).unwrap();
    assert!(fig2.starts_with("strategy,level,mean_normalized_f1,stddev,n\n"));
    assert_eq!(fig2.lines().count(), 1 + 4); // 2 strategies x 2 levels

    let fig3 = std::fs::read_to_string(report_dir.join("fig3_by_language.csv")).unwrap();
    assert!(fig3.lines().skip(1).all(|l| l.starts_with("synth,")));

    let fig4 = std::fs::read_to_string(report_dir.join("fig4_matrix.csv")).unwrap();
    assert_eq!(fig4.lines().count(), 1 + 2); // 2 matrix cells
    assert!(report_dir.join("report.json").exists());
}

#[test]
fn custom_entity_types_accept_conll_style_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("misc.conll");
    std::fs::write(
        &data,
        "-DOCSTART- -X- -X- O\n\nEU NNP I-NP B-ORG\nrejects VBZ I-VP O\nGerman JJ I-NP B-MISC\ncall NN I-NP O\n\n",
    )
    .unwrap();
    let output = nerlab(&[
        "--entity-types",
        "PER,ORG,LOC,MISC",
        "--drop-docstart",
        "--json",
        "stats",
        "--in",
        data.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["sentences"], 1);
    assert_eq!(report["entities"], 2);
    assert_eq!(report["per_type_counts"]["MISC"], 1);

    // without the custom scheme the MISC tag is rejected with a line number
    let output = nerlab(&["--json", "stats", "--in", data.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_str(stderr(&output).trim()).unwrap();
    assert_eq!(err["code"], "unknown-entity-type");
    assert_eq!(err["context"]["entity_type"], "MISC");
}

#[test]
fn combined_corrupt_writes_both_fractions_to_the_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("combined.conll");
    let output = nerlab(&[
        "corrupt",
        "--sentence-keep",
        "0.5",
        "--label-keep",
        "0.5",
        "--seed",
        "11",
        "--in",
        TRAIN,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.with_file_name("combined.conll.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["strategy"], "combined");
    assert_eq!(sidecar["sentence_keep"], 0.5);
    assert_eq!(sidecar["label_keep"], 0.5);

    let reduced = parse_conll(
        &std::fs::read(&out).unwrap(),
        &TagSchemeConfig::default(),
        &ParseOptions::default(),
    )
    .unwrap()
    .dataset;
    assert_eq!(reduced.sentences.len(), 80);
}

#[test]
fn fixture_paths_exist() {
    assert!(PathBuf::from(TRAIN).exists());
    assert!(PathBuf::from(TEST).exists());
}
