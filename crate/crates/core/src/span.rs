//! Conversion between token-level BIO tags and entity spans.
//!
//! A span is the atomic unit everywhere else in the crate: corruption removes
//! or relabels whole spans, and scoring matches spans exactly. Spans carry
//! positions only, never token text — corruption must not edit tokens.

use thiserror::Error;

use crate::conll::{BioPolicy, Dataset, Sentence, Tag, Token};

#[derive(Debug, Error)]
pub enum SpanError {
    #[error("sentence {sentence}, token {token}: orphan I- tag in strict data")]
    InvalidBio { sentence: usize, token: usize },
    #[error("sentence {sentence}: overlapping spans at token {token}")]
    OverlappingSpans { sentence: usize, token: usize },
    #[error("sentence {sentence}: span {start}..{end} out of range (length {len})")]
    SpanOutOfRange {
        sentence: usize,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("span list references sentence {sentence}, dataset has {count}")]
    SentenceOutOfRange { sentence: usize, count: usize },
}

/// A contiguous entity annotation: `[start, end)` token indices within one
/// sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub entity_type: String,
}

impl Span {
    pub fn new<S: Into<String>>(sentence: usize, start: usize, end: usize, entity_type: S) -> Span {
        Span {
            sentence,
            start,
            end,
            entity_type: entity_type.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// All spans of a dataset in document order, with per-sentence offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanIndex {
    pub spans: Vec<Span>,
    /// `per_sentence[i]..per_sentence[i+1]` slices `spans` for sentence `i`.
    pub per_sentence: Vec<usize>,
}

impl SpanIndex {
    /// Builds an index from spans that are already in document order.
    /// Validates ordering and non-overlap.
    pub fn from_spans(spans: Vec<Span>, sentence_count: usize) -> Result<SpanIndex, SpanError> {
        for span in &spans {
            if span.sentence >= sentence_count {
                return Err(SpanError::SentenceOutOfRange {
                    sentence: span.sentence,
                    count: sentence_count,
                });
            }
        }
        for pair in spans.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let ordered = a.sentence < b.sentence || (a.sentence == b.sentence && a.end <= b.start);
            if !ordered {
                return Err(SpanError::OverlappingSpans {
                    sentence: b.sentence,
                    token: b.start,
                });
            }
        }
        let mut per_sentence = Vec::with_capacity(sentence_count + 1);
        let mut cursor = 0usize;
        for sentence in 0..sentence_count {
            per_sentence.push(cursor);
            while cursor < spans.len() && spans[cursor].sentence == sentence {
                cursor += 1;
            }
        }
        per_sentence.push(spans.len());
        Ok(SpanIndex {
            spans,
            per_sentence,
        })
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn for_sentence(&self, sentence: usize) -> &[Span] {
        &self.spans[self.per_sentence[sentence]..self.per_sentence[sentence + 1]]
    }
}

/// Extracts entity spans: each maximal run `B-t (I-t)*` becomes one span.
///
/// Under a permissive scheme an orphan `I-t` starts a new span (conlleval
/// behavior); under strict or repair policies orphan `I-` tags are an error,
/// since parsing should have removed them.
pub fn extract_spans(dataset: &Dataset) -> Result<SpanIndex, SpanError> {
    let permissive = dataset.scheme.bio_policy == BioPolicy::Permissive;
    let mut spans = Vec::new();
    let mut per_sentence = Vec::with_capacity(dataset.sentences.len() + 1);

    for (s_idx, sentence) in dataset.sentences.iter().enumerate() {
        per_sentence.push(spans.len());
        let mut open: Option<(usize, &str)> = None;
        for (t_idx, token) in sentence.tokens.iter().enumerate() {
            match &token.tag {
                Tag::Outside => {
                    if let Some((start, ty)) = open.take() {
                        spans.push(Span::new(s_idx, start, t_idx, ty));
                    }
                }
                Tag::Begin(ty) => {
                    if let Some((start, open_ty)) = open.take() {
                        spans.push(Span::new(s_idx, start, t_idx, open_ty));
                    }
                    open = Some((t_idx, ty));
                }
                Tag::Inside(ty) => match open {
                    Some((_, open_ty)) if open_ty == ty => {}
                    _ => {
                        if !permissive {
                            return Err(SpanError::InvalidBio {
                                sentence: s_idx,
                                token: t_idx,
                            });
                        }
                        if let Some((start, open_ty)) = open.take() {
                            spans.push(Span::new(s_idx, start, t_idx, open_ty));
                        }
                        open = Some((t_idx, ty));
                    }
                },
            }
        }
        if let Some((start, ty)) = open {
            spans.push(Span::new(s_idx, start, sentence.len(), ty));
        }
    }
    per_sentence.push(spans.len());

    Ok(SpanIndex {
        spans,
        per_sentence,
    })
}

/// Rebuilds tags from a span set over the token shape of `shape`: everything
/// `O`, then `B` at each span start and `I` for the remainder. Token texts
/// are carried over unchanged.
pub fn apply_spans(shape: &Dataset, spans: &SpanIndex) -> Result<Dataset, SpanError> {
    let mut sentences: Vec<Sentence> = shape
        .sentences
        .iter()
        .map(|s| {
            Sentence::new(
                s.tokens
                    .iter()
                    .map(|t| Token::new(t.text.clone(), Tag::Outside))
                    .collect(),
            )
        })
        .collect();

    let mut last: Option<&Span> = None;
    for span in &spans.spans {
        if span.sentence >= sentences.len() {
            return Err(SpanError::SentenceOutOfRange {
                sentence: span.sentence,
                count: sentences.len(),
            });
        }
        let len = sentences[span.sentence].len();
        if span.is_empty() || span.end > len {
            return Err(SpanError::SpanOutOfRange {
                sentence: span.sentence,
                start: span.start,
                end: span.end,
                len,
            });
        }
        if let Some(prev) = last {
            let ordered = prev.sentence < span.sentence
                || (prev.sentence == span.sentence && prev.end <= span.start);
            if !ordered {
                return Err(SpanError::OverlappingSpans {
                    sentence: span.sentence,
                    token: span.start,
                });
            }
        }
        let tokens = &mut sentences[span.sentence].tokens;
        tokens[span.start].tag = Tag::Begin(span.entity_type.clone());
        for token in &mut tokens[span.start + 1..span.end] {
            token.tag = Tag::Inside(span.entity_type.clone());
        }
        last = Some(span);
    }

    Ok(Dataset::new(
        sentences,
        shape.scheme.clone(),
        shape.provenance.clone(),
    ))
}
