//! Ingestion of brat standoff annotations.
//!
//! A document is a single sentence (`<name>.txt`) plus text-bound
//! annotations (`<name>.ann`, lines `T<n>\t<Label> <start> <end>\t<surface>`
//! with character offsets). Relation/event/note lines are skipped. Only
//! manual labels are allowed in input; spans must nest or be disjoint and
//! must align with token boundaries.

use crate::label::Label;
use crate::tree::Token;
use thiserror::Error;

/// A text-bound annotation with character offsets into the sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanAnnotation {
    /// brat identifier, e.g. "T1".
    pub id: String,
    pub label: Label,
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

/// A tokenized sentence with its validated span annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct StandoffDoc {
    pub sentence_text: String,
    pub tokens: Vec<Token>,
    /// Character offsets of each token, parallel to `tokens`.
    pub token_offsets: Vec<(usize, usize)>,
    pub spans: Vec<SpanAnnotation>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StandoffError {
    #[error("malformed annotation line {0}")]
    MalformedLine(usize),
    #[error("unknown label {name:?} on line {line}")]
    UnknownLabel { line: usize, name: String },
    #[error("annotation {0} uses automatic label {1}, which only the exporter may assign")]
    AutomaticLabelInInput(String, Label),
    #[error("annotation {id} surface {expected:?} does not match text {found:?}")]
    SurfaceMismatch { id: String, expected: String, found: String },
    #[error("annotations {0} and {1} overlap partially")]
    PartialOverlap(String, String),
    #[error("annotations {0} and {1} cover the identical span")]
    DuplicateSpan(String, String),
    #[error("annotation {0} does not align with token boundaries")]
    SpanNotOnTokenBoundary(String),
    #[error("token {0:?} contains characters the bracketed format cannot carry")]
    UnsupportedToken(String),
}

/// Splits a sentence on whitespace and detaches trailing sentence
/// punctuation (`, . ; : ! ?`) into separate tokens, so `example,` becomes
/// `example` and `,`. Chunks made up entirely of punctuation stay whole.
/// Returns tokens together with their character offsets.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<(usize, usize)>) {
    const DETACH: [char; 6] = [',', '.', ';', ':', '!', '?'];
    let mut tokens = Vec::new();
    let mut offsets = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        let mut end = i;
        let mut detached = Vec::new();
        if !chars[start..end].iter().all(|c| DETACH.contains(c)) {
            while end - start > 1 && DETACH.contains(&chars[end - 1]) {
                detached.push((end - 1, end));
                end -= 1;
            }
        }
        let mut push = |s: usize, e: usize| {
            let text: String = chars[s..e].iter().collect();
            tokens.push(Token::new(text, tokens.len()));
            offsets.push((s, e));
        };
        push(start, end);
        for (s, e) in detached.into_iter().rev() {
            push(s, e);
        }
    }
    (tokens, offsets)
}

impl StandoffDoc {
    /// Validates spans against the tokenized sentence and builds the doc.
    pub fn new(
        sentence_text: impl Into<String>,
        spans: Vec<SpanAnnotation>,
    ) -> Result<StandoffDoc, StandoffError> {
        let sentence_text = sentence_text.into();
        let (tokens, token_offsets) = tokenize(&sentence_text);
        for token in &tokens {
            if token.text.contains(['(', ')']) {
                return Err(StandoffError::UnsupportedToken(token.text.clone()));
            }
        }
        let chars: Vec<char> = sentence_text.chars().collect();

        for span in &spans {
            if span.label.is_automatic() {
                return Err(StandoffError::AutomaticLabelInInput(span.id.clone(), span.label));
            }
            let found: String = chars
                .get(span.start..span.end)
                .map(|s| s.iter().collect())
                .unwrap_or_default();
            if span.start >= span.end || found != span.surface {
                return Err(StandoffError::SurfaceMismatch {
                    id: span.id.clone(),
                    expected: span.surface.clone(),
                    found,
                });
            }
            let starts = token_offsets.iter().any(|&(s, _)| s == span.start);
            let ends = token_offsets.iter().any(|&(_, e)| e == span.end);
            if !starts || !ends {
                return Err(StandoffError::SpanNotOnTokenBoundary(span.id.clone()));
            }
        }

        for (i, a) in spans.iter().enumerate() {
            for b in &spans[i + 1..] {
                if a.start == b.start && a.end == b.end {
                    return Err(StandoffError::DuplicateSpan(a.id.clone(), b.id.clone()));
                }
                let disjoint = a.end <= b.start || b.end <= a.start;
                let nested = (a.start <= b.start && b.end <= a.end)
                    || (b.start <= a.start && a.end <= b.end);
                if !disjoint && !nested {
                    return Err(StandoffError::PartialOverlap(a.id.clone(), b.id.clone()));
                }
            }
        }

        Ok(StandoffDoc { sentence_text, tokens, token_offsets, spans })
    }

    /// Token index range `[start, end)` covered by a character span.
    /// Only valid for spans that passed boundary validation.
    pub fn token_range(&self, span: &SpanAnnotation) -> (usize, usize) {
        let start = self
            .token_offsets
            .iter()
            .position(|&(s, _)| s == span.start)
            .expect("span start validated against token boundaries");
        let end = self
            .token_offsets
            .iter()
            .position(|&(_, e)| e == span.end)
            .expect("span end validated against token boundaries")
            + 1;
        (start, end)
    }
}

/// Parses a brat `.ann` file against its sentence. Text-bound lines are
/// validated, everything else (relations, events, notes) is skipped.
pub fn parse_standoff(ann_text: &str, sentence_text: &str) -> Result<StandoffDoc, StandoffError> {
    let mut spans = Vec::new();
    for (i, raw) in ann_text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() || !line.starts_with('T') {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let id = fields.next().filter(|s| !s.is_empty());
        let middle = fields.next();
        let surface = fields.next();
        let (id, middle, surface) = match (id, middle, surface) {
            (Some(id), Some(middle), Some(surface)) => (id, middle, surface),
            _ => return Err(StandoffError::MalformedLine(line_no)),
        };
        let mut parts = middle.split_whitespace();
        let name = parts.next().ok_or(StandoffError::MalformedLine(line_no))?;
        let start: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(StandoffError::MalformedLine(line_no))?;
        let end: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(StandoffError::MalformedLine(line_no))?;
        if parts.next().is_some() {
            // Discontinuous spans ("start end;start end") are not supported.
            return Err(StandoffError::MalformedLine(line_no));
        }
        let label = Label::from_name(name).ok_or_else(|| StandoffError::UnknownLabel {
            line: line_no,
            name: name.to_string(),
        })?;
        spans.push(SpanAnnotation {
            id: id.to_string(),
            label,
            start,
            end,
            surface: surface.to_string(),
        });
    }
    StandoffDoc::new(sentence_text, spans)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_with_punct_detachment() {
        let (tokens, offsets) = tokenize("For example, when E=16 and I=5, then bits.");
        let words: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(
            words,
            ["For", "example", ",", "when", "E=16", "and", "I=5", ",", "then", "bits", "."]
        );
        assert_eq!(offsets[1], (4, 11));
        assert_eq!(offsets[2], (11, 12));
        let indices: Vec<usize> = tokens.iter().map(|t| t.index).collect();
        assert_eq!(indices, (0..11).collect::<Vec<_>>());
    }

    #[test]
    fn all_punct_chunks_stay_whole() {
        let (tokens, _) = tokenize("wait ... done .");
        let words: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(words, ["wait", "...", "done", "."]);
    }

    #[test]
    fn parses_simple_annotation() {
        let doc = parse_standoff("T1\tVariable 0 1\tA\n", "A is true.").unwrap();
        assert_eq!(doc.spans.len(), 1);
        assert_eq!(doc.spans[0].label, Label::Variable);
        assert_eq!(doc.token_range(&doc.spans[0]), (0, 1));
    }

    #[test]
    fn accepts_nested_spans() {
        let text = "A is true";
        let ann = "T1\tVariable 0 1\tA\nT2\tCondition 2 9\tis true\nT3\tStatement 0 9\tA is true\n";
        let doc = parse_standoff(ann, text).unwrap();
        assert_eq!(doc.spans.len(), 3);
        assert_eq!(doc.token_range(&doc.spans[2]), (0, 3));
    }

    #[test]
    fn rejects_partial_overlap() {
        let text = "A is true now";
        let ann = "T1\tStatement 0 9\tA is true\nT2\tCause 2 13\tis true now\n";
        assert_eq!(
            parse_standoff(ann, text).unwrap_err(),
            StandoffError::PartialOverlap("T1".into(), "T2".into())
        );
    }

    #[test]
    fn rejects_automatic_labels() {
        let err = parse_standoff("T1\tWord 0 1\tA\n", "A is true.").unwrap_err();
        assert_eq!(err, StandoffError::AutomaticLabelInInput("T1".into(), Label::Word));
    }

    #[test]
    fn rejects_surface_mismatch() {
        let err = parse_standoff("T1\tVariable 0 1\tB\n", "A is true.").unwrap_err();
        assert!(matches!(err, StandoffError::SurfaceMismatch { .. }));
    }

    #[test]
    fn skips_non_text_bound_lines() {
        let ann = "T1\tVariable 0 1\tA\nR1\tCausal Arg1:T1 Arg2:T1\n#1\tAnnotatorNotes T1\tfine\n";
        let doc = parse_standoff(ann, "A is true.").unwrap();
        assert_eq!(doc.spans.len(), 1);
    }

    #[test]
    fn rejects_misaligned_span() {
        let err = parse_standoff("T1\tVariable 0 3\tA i\n", "A is true.").unwrap_err();
        assert_eq!(err, StandoffError::SpanNotOnTokenBoundary("T1".into()));
    }

    #[test]
    fn rejects_malformed_line() {
        assert_eq!(
            parse_standoff("T1\tVariable zero 1\tA\n", "A is true.").unwrap_err(),
            StandoffError::MalformedLine(1)
        );
        assert_eq!(
            parse_standoff("T1 Variable 0 1 A\n", "A is true.").unwrap_err(),
            StandoffError::MalformedLine(1)
        );
    }
}
