//! Whitespace-column CoNLL parsing and serialization.
//!
//! The on-disk convention: one token per line, blank lines between sentences,
//! token in the first column and tag in the last (both configurable via
//! [`ParseOptions`]). Tags follow BIO2: `O`, `B-TYPE`, `I-TYPE`, with the
//! entity types declared by a [`TagSchemeConfig`]. Input must be UTF-8; the
//! parser never transcodes.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConllError {
    #[error("input is not valid UTF-8 (line {line})")]
    InvalidUtf8 { line: usize },
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: unknown entity type {entity_type:?}")]
    UnknownEntityType { line: usize, entity_type: String },
    #[error("line {line}: invalid BIO sequence (orphan I- tag under strict policy)")]
    InvalidBio { line: usize },
    #[error("input contains no sentences")]
    EmptyInput,
    #[error("invalid tag scheme: {0}")]
    InvalidScheme(String),
}

/// How the parser treats BIO violations (an `I-X` with no live `B-X`/`I-X`
/// immediately before it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BioPolicy {
    /// Violations are a parse error.
    Strict,
    /// Orphan `I-X` is rewritten to `B-X` and the rewrite counted.
    Repair,
    /// Tags are kept verbatim; span extraction treats an orphan `I-X` as a
    /// span start.
    Permissive,
}

impl fmt::Display for BioPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BioPolicy::Strict => write!(f, "strict"),
            BioPolicy::Repair => write!(f, "repair"),
            BioPolicy::Permissive => write!(f, "permissive"),
        }
    }
}

/// The declared entity types plus the BIO policy active for a dataset.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TagSchemeConfig {
    pub entity_types: Vec<String>,
    pub bio_policy: BioPolicy,
}

impl TagSchemeConfig {
    /// Validates that entity types are non-empty, unique, and contain no `-`.
    pub fn new<S: Into<String>>(
        entity_types: Vec<S>,
        bio_policy: BioPolicy,
    ) -> Result<Self, ConllError> {
        let entity_types: Vec<String> = entity_types.into_iter().map(Into::into).collect();
        if entity_types.is_empty() {
            return Err(ConllError::InvalidScheme(
                "entity type list must be non-empty".into(),
            ));
        }
        let mut seen = HashSet::new();
        for name in &entity_types {
            if name.is_empty() {
                return Err(ConllError::InvalidScheme("empty entity type name".into()));
            }
            if name.contains('-') {
                return Err(ConllError::InvalidScheme(format!(
                    "entity type {name:?} must not contain '-'"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(ConllError::InvalidScheme(format!(
                    "duplicate entity type {name:?}"
                )));
            }
        }
        Ok(TagSchemeConfig {
            entity_types,
            bio_policy,
        })
    }

    pub fn contains(&self, entity_type: &str) -> bool {
        self.entity_types.iter().any(|t| t == entity_type)
    }
}

impl Default for TagSchemeConfig {
    fn default() -> Self {
        TagSchemeConfig {
            entity_types: vec!["PER".into(), "ORG".into(), "LOC".into(), "DATE".into()],
            bio_policy: BioPolicy::Repair,
        }
    }
}

/// A single token's BIO tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tag {
    Outside,
    Begin(String),
    Inside(String),
}

impl Tag {
    pub fn entity_type(&self) -> Option<&str> {
        match self {
            Tag::Outside => None,
            Tag::Begin(t) | Tag::Inside(t) => Some(t),
        }
    }

    /// Parses `O` / `B-X` / `I-X`, checking `X` against the scheme.
    fn parse(raw: &str, scheme: &TagSchemeConfig, line: usize) -> Result<Tag, ConllError> {
        if raw == "O" {
            return Ok(Tag::Outside);
        }
        let (prefix, entity_type) = match raw.split_once('-') {
            Some((p, t)) if !t.is_empty() => (p, t),
            _ => {
                return Err(ConllError::MalformedLine {
                    line,
                    reason: format!("tag {raw:?} is not O, B-TYPE, or I-TYPE"),
                })
            }
        };
        if !scheme.contains(entity_type) {
            return Err(ConllError::UnknownEntityType {
                line,
                entity_type: entity_type.to_string(),
            });
        }
        match prefix {
            "B" => Ok(Tag::Begin(entity_type.to_string())),
            "I" => Ok(Tag::Inside(entity_type.to_string())),
            _ => Err(ConllError::MalformedLine {
                line,
                reason: format!("tag {raw:?} has prefix {prefix:?}, expected B or I"),
            }),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Outside => write!(f, "O"),
            Tag::Begin(t) => write!(f, "B-{t}"),
            Tag::Inside(t) => write!(f, "I-{t}"),
        }
    }
}

/// A token: non-empty text with no internal whitespace, plus its tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub tag: Tag,
}

impl Token {
    pub fn new<S: Into<String>>(text: S, tag: Tag) -> Token {
        Token {
            text: text.into(),
            tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Sentence {
        Sentence { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// An ordered collection of sentences under a declared tag scheme.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub sentences: Vec<Sentence>,
    pub scheme: TagSchemeConfig,
    /// Free-text source description; not part of content equality.
    pub provenance: String,
}

impl Dataset {
    pub fn new(sentences: Vec<Sentence>, scheme: TagSchemeConfig, provenance: String) -> Dataset {
        Dataset {
            sentences,
            scheme,
            provenance,
        }
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    /// Structural equality over sentences and entity types, ignoring
    /// provenance (metadata) and BIO policy (parse behavior).
    pub fn content_eq(&self, other: &Dataset) -> bool {
        self.scheme.entity_types == other.scheme.entity_types && self.sentences == other.sentences
    }

    /// True when every `I-X` is immediately preceded by `B-X` or `I-X`.
    pub fn is_valid_bio(&self) -> bool {
        self.sentences.iter().all(|sentence| {
            let mut prev: Option<&Tag> = None;
            for token in &sentence.tokens {
                if let Tag::Inside(t) = &token.tag {
                    match prev {
                        Some(Tag::Begin(p)) | Some(Tag::Inside(p)) if p == t => {}
                        _ => return false,
                    }
                }
                prev = Some(&token.tag);
            }
            true
        })
    }
}

/// Line-handling switches for [`parse_conll`].
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct ParseOptions {
    /// 0-based tag column; `None` selects the last column.
    pub tag_column: Option<usize>,
    /// Drop lines whose first column is `-DOCSTART-`.
    pub drop_docstart: bool,
    /// Skip lines starting with `#`. Off by default because `#` is a legal
    /// token in news text.
    pub skip_comments: bool,
}

/// A parsed dataset plus bookkeeping about what the parser changed or skipped.
#[derive(Debug)]
pub struct ParsedConll {
    pub dataset: Dataset,
    /// Orphan `I-X` tags rewritten to `B-X` (repair policy only).
    pub repairs: usize,
    pub docstarts_dropped: usize,
    pub comments_skipped: usize,
}

/// Parses CoNLL-style bytes into a [`Dataset`].
///
/// Blank lines delimit sentences and consecutive blank lines collapse. Each
/// content line needs at least two whitespace-separated columns: the token is
/// the first, the tag the last (or `options.tag_column`), and intermediate
/// columns are ignored.
pub fn parse_conll(
    input: &[u8],
    scheme: &TagSchemeConfig,
    options: &ParseOptions,
) -> Result<ParsedConll, ConllError> {
    let text = match std::str::from_utf8(input) {
        Ok(t) => t,
        Err(e) => {
            let line = input[..e.valid_up_to()]
                .iter()
                .filter(|&&b| b == b'\n')
                .count()
                + 1;
            return Err(ConllError::InvalidUtf8 { line });
        }
    };

    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    // Line numbers of the current sentence's tokens, for BIO diagnostics.
    let mut current_lines: Vec<usize> = Vec::new();
    let mut repairs = 0usize;
    let mut docstarts_dropped = 0usize;
    let mut comments_skipped = 0usize;

    let mut flush = |tokens: &mut Vec<Token>, lines: &mut Vec<usize>| -> Result<(), ConllError> {
        if tokens.is_empty() {
            return Ok(());
        }
        match scheme.bio_policy {
            BioPolicy::Permissive => {}
            BioPolicy::Strict | BioPolicy::Repair => {
                for i in 0..tokens.len() {
                    let orphan = match &tokens[i].tag {
                        Tag::Inside(t) => {
                            if i == 0 {
                                true
                            } else {
                                !matches!(
                                    &tokens[i - 1].tag,
                                    Tag::Begin(p) | Tag::Inside(p) if p == t
                                )
                            }
                        }
                        _ => false,
                    };
                    if orphan {
                        match scheme.bio_policy {
                            BioPolicy::Strict => {
                                return Err(ConllError::InvalidBio { line: lines[i] })
                            }
                            BioPolicy::Repair => {
                                let t = tokens[i].tag.entity_type().unwrap().to_string();
                                tokens[i].tag = Tag::Begin(t);
                                repairs += 1;
                            }
                            BioPolicy::Permissive => unreachable!(),
                        }
                    }
                }
            }
        }
        sentences.push(Sentence::new(std::mem::take(tokens)));
        lines.clear();
        Ok(())
    };

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut current, &mut current_lines)?;
            continue;
        }
        if options.skip_comments && line.starts_with('#') {
            comments_skipped += 1;
            continue;
        }
        let columns: Vec<&str> = line.split_whitespace().collect();
        if options.drop_docstart && columns[0] == "-DOCSTART-" {
            docstarts_dropped += 1;
            continue;
        }
        if columns.len() < 2 {
            return Err(ConllError::MalformedLine {
                line: line_no,
                reason: format!("expected at least 2 columns, found {}", columns.len()),
            });
        }
        let tag_col = match options.tag_column {
            Some(c) => {
                if c >= columns.len() {
                    return Err(ConllError::MalformedLine {
                        line: line_no,
                        reason: format!(
                            "tag column {c} out of range for {}-column line",
                            columns.len()
                        ),
                    });
                }
                c
            }
            None => columns.len() - 1,
        };
        let tag = Tag::parse(columns[tag_col], scheme, line_no)?;
        current.push(Token::new(columns[0], tag));
        current_lines.push(line_no);
    }
    flush(&mut current, &mut current_lines)?;

    if sentences.is_empty() {
        return Err(ConllError::EmptyInput);
    }

    Ok(ParsedConll {
        dataset: Dataset::new(sentences, scheme.clone(), String::new()),
        repairs,
        docstarts_dropped,
        comments_skipped,
    })
}

/// Serializes to the canonical form: `token<space>tag` lines, one blank line
/// after each sentence. Re-parsing under the same scheme reproduces the
/// dataset, and re-serializing reproduces the bytes.
pub fn serialize_conll(dataset: &Dataset) -> Vec<u8> {
    let mut out = String::new();
    for sentence in &dataset.sentences {
        for token in &sentence.tokens {
            out.push_str(&token.text);
            out.push(' ');
            out.push_str(&token.tag.to_string());
            out.push('\n');
        }
        out.push('\n');
    }
    out.into_bytes()
}
