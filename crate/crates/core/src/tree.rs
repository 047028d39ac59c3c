//! Fully labeled binary parse trees and their bracketed text form.
//!
//! The serialization is one s-expression per sentence, with numeric label
//! IDs: `tree := '(' id (tree tree | token) ')'`. A leaf holds exactly one
//! token, an internal node exactly two subtrees.

use crate::label::Label;
use std::fmt;
use thiserror::Error;

/// A single token of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    /// Surface text. Never empty, never contains whitespace or parentheses.
    pub text: String,
    /// 0-based position within the sentence.
    pub index: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, index: usize) -> Token {
        Token { text: text.into(), index }
    }
}

/// A strictly binary, fully labeled parse tree.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseTree {
    Leaf {
        label: Label,
        token: Token,
    },
    Internal {
        label: Label,
        left: Box<ParseTree>,
        right: Box<ParseTree>,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("unbalanced parentheses at byte {0}")]
    UnbalancedParens(usize),
    #[error("unknown label id {id} at byte {at}")]
    UnknownLabelId { id: u32, at: usize },
    #[error("node at byte {0} does not have exactly two subtree children")]
    NonBinaryNode(usize),
    #[error("empty leaf at byte {0}")]
    EmptyLeaf(usize),
    #[error("expected {expected} at byte {at}")]
    Malformed { expected: &'static str, at: usize },
}

/// A deviation from the treebank's structural conventions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaViolation {
    /// A leaf carries a label that can only dominate multiple tokens.
    LeafWithInternalLabel { span: (usize, usize), label: Label },
    /// An internal node carries a token-level label (Word/Punct/Symbol).
    InternalWithTokenLabel { span: (usize, usize), label: Label },
    /// The root of a sentence tree is not RootSentence.
    RootNotRootSentence { label: Label },
    /// RootSentence appears somewhere below the root.
    RootSentenceBelowRoot { span: (usize, usize) },
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaViolation::LeafWithInternalLabel { span, label } => {
                write!(f, "leaf {}..{} has internal-only label {label}", span.0, span.1)
            }
            SchemaViolation::InternalWithTokenLabel { span, label } => {
                write!(f, "internal node {}..{} has token label {label}", span.0, span.1)
            }
            SchemaViolation::RootNotRootSentence { label } => {
                write!(f, "root is {label}, not RootSentence")
            }
            SchemaViolation::RootSentenceBelowRoot { span } => {
                write!(f, "RootSentence below the root at {}..{}", span.0, span.1)
            }
        }
    }
}

impl ParseTree {
    pub fn leaf(label: Label, token: Token) -> ParseTree {
        ParseTree::Leaf { label, token }
    }

    pub fn internal(label: Label, left: ParseTree, right: ParseTree) -> ParseTree {
        ParseTree::Internal { label, left: Box::new(left), right: Box::new(right) }
    }

    pub fn label(&self) -> Label {
        match self {
            ParseTree::Leaf { label, .. } | ParseTree::Internal { label, .. } => *label,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, ParseTree::Leaf { .. })
    }

    /// Number of leaves under this node; for the whole tree this is the
    /// sentence length, for a subtree its n-gram length.
    pub fn ngram_length(&self) -> usize {
        match self {
            ParseTree::Leaf { .. } => 1,
            ParseTree::Internal { left, right, .. } => left.ngram_length() + right.ngram_length(),
        }
    }

    /// Total node count. Always `2n - 1` for `n` leaves.
    pub fn node_count(&self) -> usize {
        match self {
            ParseTree::Leaf { .. } => 1,
            ParseTree::Internal { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    /// Leaves in reading order.
    pub fn leaves(&self) -> Vec<&Token> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Token>) {
        match self {
            ParseTree::Leaf { token, .. } => out.push(token),
            ParseTree::Internal { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Every node as `((start, end), label)` with token spans relative to
    /// this tree, in pre-order.
    pub fn span_labels(&self) -> Vec<((usize, usize), Label)> {
        let mut out = Vec::with_capacity(self.node_count());
        self.collect_spans(0, &mut out);
        out
    }

    fn collect_spans(&self, offset: usize, out: &mut Vec<((usize, usize), Label)>) -> usize {
        match self {
            ParseTree::Leaf { label, .. } => {
                out.push(((offset, offset + 1), *label));
                offset + 1
            }
            ParseTree::Internal { label, left, right } => {
                let slot = out.len();
                out.push(((0, 0), *label));
                let mid = left.collect_spans(offset, out);
                let end = right.collect_spans(mid, out);
                out[slot] = ((offset, end), *label);
                end
            }
        }
    }

    /// All labels in pre-order, used for frequency counting.
    pub fn labels(&self) -> Vec<Label> {
        self.span_labels().into_iter().map(|(_, l)| l).collect()
    }

    /// Lints the tree against the treebank's structural conventions.
    /// An empty result means the tree is clean sentence-level gold data.
    pub fn validate_schema(&self) -> Vec<SchemaViolation> {
        let mut out = Vec::new();
        if self.label() != Label::RootSentence {
            out.push(SchemaViolation::RootNotRootSentence { label: self.label() });
        }
        for (i, (span, label)) in self.span_labels().into_iter().enumerate() {
            let is_root = i == 0;
            if !is_root && label == Label::RootSentence {
                out.push(SchemaViolation::RootSentenceBelowRoot { span });
            }
            let leaf = span.1 - span.0 == 1;
            if leaf && label.is_internal_only() {
                out.push(SchemaViolation::LeafWithInternalLabel { span, label });
            }
            if !leaf && label.is_token_label() {
                out.push(SchemaViolation::InternalWithTokenLabel { span, label });
            }
        }
        out
    }

    /// Parses the bracketed text form. Whitespace between siblings is
    /// arbitrary; token indices are assigned in reading order.
    pub fn parse_bracketed(text: &str) -> Result<ParseTree, TreeError> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut next_index = 0usize;
        let tree = parse_node(bytes, &mut pos, &mut next_index)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(TreeError::UnbalancedParens(pos));
        }
        Ok(tree)
    }

    /// Canonical bracketed form: single space between siblings, no trailing
    /// whitespace. `parse_bracketed` of the output reproduces the tree.
    pub fn serialize_bracketed(&self) -> String {
        let mut out = String::new();
        self.write_bracketed(&mut out);
        out
    }

    fn write_bracketed(&self, out: &mut String) {
        match self {
            ParseTree::Leaf { label, token } => {
                out.push('(');
                out.push_str(&label.id().to_string());
                out.push(' ');
                out.push_str(&token.text);
                out.push(')');
            }
            ParseTree::Internal { label, left, right } => {
                out.push('(');
                out.push_str(&label.id().to_string());
                out.push(' ');
                left.write_bracketed(out);
                out.push(' ');
                right.write_bracketed(out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize_bracketed())
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_node(bytes: &[u8], pos: &mut usize, next_index: &mut usize) -> Result<ParseTree, TreeError> {
    skip_ws(bytes, pos);
    if *pos >= bytes.len() || bytes[*pos] != b'(' {
        return Err(TreeError::UnbalancedParens(*pos));
    }
    let open_at = *pos;
    *pos += 1;
    skip_ws(bytes, pos);

    let id_start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == id_start {
        return Err(TreeError::Malformed { expected: "numeric label id", at: *pos });
    }
    let id: u32 = std::str::from_utf8(&bytes[id_start..*pos])
        .expect("digits are valid utf-8")
        .parse()
        .map_err(|_| TreeError::Malformed { expected: "numeric label id", at: id_start })?;
    let label =
        Label::from_id(id).ok_or(TreeError::UnknownLabelId { id, at: id_start })?;

    skip_ws(bytes, pos);
    let mut children: Vec<ParseTree> = Vec::new();
    let mut token_text: Option<String> = None;
    loop {
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            None => return Err(TreeError::UnbalancedParens(*pos)),
            Some(b')') => {
                *pos += 1;
                break;
            }
            Some(b'(') => {
                if token_text.is_some() {
                    return Err(TreeError::NonBinaryNode(open_at));
                }
                children.push(parse_node(bytes, pos, next_index)?);
            }
            Some(_) => {
                if !children.is_empty() || token_text.is_some() {
                    return Err(TreeError::NonBinaryNode(open_at));
                }
                let start = *pos;
                while *pos < bytes.len()
                    && !bytes[*pos].is_ascii_whitespace()
                    && bytes[*pos] != b'('
                    && bytes[*pos] != b')'
                {
                    *pos += 1;
                }
                token_text = Some(
                    std::str::from_utf8(&bytes[start..*pos])
                        .map_err(|_| TreeError::Malformed { expected: "utf-8 token", at: start })?
                        .to_string(),
                );
            }
        }
    }

    match (token_text, children.len()) {
        (Some(text), 0) => {
            let token = Token::new(text, *next_index);
            *next_index += 1;
            Ok(ParseTree::leaf(label, token))
        }
        (None, 2) => {
            let mut it = children.into_iter();
            let left = it.next().expect("two children");
            let right = it.next().expect("two children");
            Ok(ParseTree::internal(label, left, right))
        }
        (None, 0) => Err(TreeError::EmptyLeaf(open_at)),
        _ => Err(TreeError::NonBinaryNode(open_at)),
    }
}
