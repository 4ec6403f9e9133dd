//! Error-to-exit-code mapping and output sidecars.
//!
//! Domain failures exit with status 1 and print either a human-readable
//! message or, under `--json`, a stable `{code, message, context}` object on
//! stderr. Usage errors are clap's domain and exit with status 2.
//!
//! Every file-writing subcommand drops a `<output>.json` sidecar recording
//! the tool version and the fully resolved configuration, so results remain
//! attributable after the fact.

use std::path::Path;

use serde_json::{json, Value};

use nerlab_core::conll::ConllError;
use nerlab_core::corrupt::CorruptError;
use nerlab_core::experiment::ExperimentError;
use nerlab_core::scoring::ScoreError;
use nerlab_core::span::SpanError;
use nerlab_core::stats::StatsError;
use nerlab_core::tagger::TaggerError;

pub const TOOL_NAME: &str = "nerlab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub context: Value,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>, context: Value) -> CliError {
        CliError {
            code: code.to_string(),
            message: message.into(),
            context,
        }
    }

    pub fn io(path: &Path, err: &std::io::Error) -> CliError {
        CliError::new(
            "io",
            format!("{}: {err}", path.display()),
            json!({ "path": path.display().to_string() }),
        )
    }

    /// Renders to stderr and returns the process exit code.
    pub fn report(&self, machine_readable: bool) -> i32 {
        if machine_readable {
            let payload = json!({
                "code": self.code,
                "message": self.message,
                "context": self.context,
            });
            eprintln!("{payload}");
        } else {
            eprintln!("error: {}", self.message);
        }
        1
    }
}

impl From<ConllError> for CliError {
    fn from(err: ConllError) -> CliError {
        let (code, context) = match &err {
            ConllError::InvalidUtf8 { line } => ("invalid-utf8", json!({ "line": line })),
            ConllError::MalformedLine { line, reason } => {
                ("malformed-line", json!({ "line": line, "reason": reason }))
            }
            ConllError::UnknownEntityType { line, entity_type } => (
                "unknown-entity-type",
                json!({ "line": line, "entity_type": entity_type }),
            ),
            ConllError::InvalidBio { line } => ("invalid-bio", json!({ "line": line })),
            ConllError::EmptyInput => ("empty-input", Value::Null),
            ConllError::InvalidScheme(reason) => ("invalid-scheme", json!({ "reason": reason })),
        };
        CliError::new(code, err.to_string(), context)
    }
}

impl From<SpanError> for CliError {
    fn from(err: SpanError) -> CliError {
        let code = match &err {
            SpanError::InvalidBio { .. } => "invalid-bio",
            SpanError::OverlappingSpans { .. } => "overlapping-spans",
            SpanError::SpanOutOfRange { .. } | SpanError::SentenceOutOfRange { .. } => {
                "span-out-of-range"
            }
        };
        CliError::new(code, err.to_string(), Value::Null)
    }
}

impl From<CorruptError> for CliError {
    fn from(err: CorruptError) -> CliError {
        match err {
            CorruptError::Span(e) => e.into(),
            CorruptError::EmptyDataset => {
                CliError::new("empty-dataset", err.to_string(), Value::Null)
            }
            CorruptError::DegenerateScheme(n) => {
                CliError::new("degenerate-scheme", err.to_string(), json!({ "types": n }))
            }
            CorruptError::EmptyOriginalWithNonemptyReduced(n) => CliError::new(
                "empty-original",
                err.to_string(),
                json!({ "reduced_entities": n }),
            ),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(err: StatsError) -> CliError {
        match err {
            StatsError::Span(e) => e.into(),
            StatsError::EmptyDataset => {
                CliError::new("empty-dataset", err.to_string(), Value::Null)
            }
        }
    }
}

impl From<ScoreError> for CliError {
    fn from(err: ScoreError) -> CliError {
        match err {
            ScoreError::Span(e) => e.into(),
            ScoreError::ShapeMismatch(ref detail) => CliError::new(
                "shape-mismatch",
                err.to_string(),
                json!({ "detail": detail }),
            ),
            ScoreError::ZeroBaseline => {
                CliError::new("zero-baseline", err.to_string(), Value::Null)
            }
        }
    }
}

impl From<TaggerError> for CliError {
    fn from(err: TaggerError) -> CliError {
        let code = match &err {
            TaggerError::EmptyDataset => "empty-dataset",
            TaggerError::EmptyInput => "empty-input",
            TaggerError::InvalidBio => "invalid-bio",
            TaggerError::ModelFormat { .. } => "model-format",
            TaggerError::Io(_) => "io",
        };
        CliError::new(code, err.to_string(), Value::Null)
    }
}

impl From<ExperimentError> for CliError {
    fn from(err: ExperimentError) -> CliError {
        match err {
            ExperimentError::Train(e) => e.into(),
            ExperimentError::Corrupt(e) => e.into(),
            ExperimentError::Score(e) => e.into(),
            ExperimentError::Span(e) => e.into(),
            ExperimentError::InvalidGrid(ref reason) => {
                CliError::new("invalid-grid", err.to_string(), json!({ "reason": reason }))
            }
            ExperimentError::Csv { line, ref reason } => CliError::new(
                "results-csv",
                err.to_string(),
                json!({ "line": line, "reason": reason }),
            ),
            ExperimentError::Io(_) => CliError::new("io", err.to_string(), Value::Null),
        }
    }
}

/// Writes `<output>.json` next to an output file: tool identity, the command,
/// the resolved configuration, and any command-specific details.
pub fn write_sidecar(
    output: &Path,
    command: &str,
    config: Value,
    details: Value,
) -> Result<(), CliError> {
    let mut payload = json!({
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "config": config,
    });
    if let (Some(map), Value::Object(extra)) = (payload.as_object_mut(), details) {
        for (key, value) in extra {
            map.insert(key, value);
        }
    }
    let path = sidecar_path(output);
    let mut text = serde_json::to_string_pretty(&payload).expect("sidecar is serializable");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, &e))
}

pub fn sidecar_path(output: &Path) -> std::path::PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".json");
    output.with_file_name(name)
}
