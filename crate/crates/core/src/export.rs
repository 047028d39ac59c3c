//! Conversion of standoff annotations to binary bracketed trees.
//!
//! The exporter rebuilds a strictly binary structure from the (arbitrarily
//! nested, non-binary) manual spans of a [`StandoffDoc`]:
//!
//! 1. Every token gets a leaf label: the label of a single-token manual
//!    annotation if one covers it, otherwise `Word`/`Punct`/`Symbol`.
//! 2. A sentence skeleton is inserted where no manual span already covers
//!    the range: `RootSentence` over the whole sentence, a `Sentence` node
//!    over everything before the final punctuation mark, and a `Sentence`
//!    node over the prefix that precedes the final clause (the last
//!    top-level annotation).
//! 3. Nodes with more than two children are binarized. When a child is a
//!    separator token (`,` `:` `;`), the separator merges with the segment
//!    before it into that segment's `Separated` variant (falling back to
//!    the parent's label when no variant exists), and the resulting
//!    separator-terminated groups attach right-to-left. Otherwise the
//!    children cascade in the chosen branching direction, each cascade node
//!    inheriting the parent's label.

use crate::label::{self, Label};
use crate::standoff::StandoffDoc;
use crate::tree::{ParseTree, Token};
use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

/// Direction in which annotations with more than two children are binarized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    Left,
    Right,
}

impl fmt::Display for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branching::Left => "left",
            Branching::Right => "right",
        })
    }
}

/// Corpus-level branching selection; `Both` concatenates the left-branching
/// exports with the right-branching ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusBranching {
    Left,
    Right,
    Both,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExportError {
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("no final punctuation token free of annotations")]
    NoFinalPunct,
    #[error("token {0} is not covered by the exported tree")]
    UncoveredToken(usize),
}

/// Per-document failures of a corpus export, keyed by document name.
#[derive(Debug, Error)]
#[error("{} document(s) failed to export", failures.len())]
pub struct CorpusExportError {
    pub failures: Vec<(String, ExportError)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Span {
    start: usize,
    end: usize,
    label: Label,
}

impl Span {
    fn len(&self) -> usize {
        self.end - self.start
    }

    fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Exports one document as a binary tree whose leaves are exactly the
/// document's tokens in order.
pub fn export_tree(doc: &StandoffDoc, branching: Branching) -> Result<ParseTree, ExportError> {
    let n = doc.tokens.len();
    if n == 0 {
        return Err(ExportError::EmptySentence);
    }

    // Token-range form of the manual spans.
    let spans: Vec<Span> = doc
        .spans
        .iter()
        .map(|s| {
            let (start, end) = doc.token_range(s);
            Span { start, end, label: s.label }
        })
        .collect();

    // Leaf labels: single-token annotations win over the token-level rule.
    let mut leaf_labels: Vec<Label> =
        doc.tokens.iter().map(|t| label::token_label(&t.text)).collect();
    for span in spans.iter().filter(|s| s.len() == 1) {
        leaf_labels[span.start] = span.label;
    }

    // The final punctuation must exist and must not sit inside any manual
    // annotation (a whole-sentence RootSentence is the one exception).
    if leaf_labels[n - 1] != Label::Punct
        || !label::is_sentence_final_token(&doc.tokens[n - 1].text)
        || spans.iter().any(|s| {
            s.end == n && !(s.start == 0 && s.label == Label::RootSentence)
        })
    {
        return Err(ExportError::NoFinalPunct);
    }
    if n == 1 {
        // A bare punctuation mark has no clause to attach it to.
        return Err(ExportError::NoFinalPunct);
    }

    // Multi-token spans form the hierarchy; add the sentence skeleton.
    let mut nodes: Vec<Span> = spans.iter().copied().filter(|s| s.len() >= 2).collect();
    let exists = |nodes: &[Span], start: usize, end: usize| {
        nodes.iter().any(|s| s.start == start && s.end == end)
    };

    // Final clause: the last top-level annotation before the final punct.
    let body_end = n - 1;
    let candidates: Vec<Span> =
        nodes.iter().copied().filter(|s| s.end <= body_end).collect();
    let final_clause = candidates
        .iter()
        .filter(|s| !candidates.iter().any(|o| o != *s && o.contains(s)))
        .max_by_key(|s| s.start)
        .copied();

    if let Some(fc) = final_clause {
        if fc.start >= 2 && !exists(&nodes, 0, fc.start) {
            nodes.push(Span { start: 0, end: fc.start, label: Label::Sentence });
        }
    }
    if body_end >= 2 && !exists(&nodes, 0, body_end) {
        nodes.push(Span { start: 0, end: body_end, label: Label::Sentence });
    }
    if !exists(&nodes, 0, n) {
        nodes.push(Span { start: 0, end: n, label: Label::RootSentence });
    }

    // Outermost-first order; ranges are unique, so this is unambiguous.
    nodes.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
    let root = nodes[0];
    debug_assert!(root.start == 0 && root.end == n);

    let tree = build_node(doc, &leaf_labels, root, &nodes[1..], branching);

    // Every token must have come out as a leaf, in order.
    let leaves = tree.leaves();
    if leaves.len() != n {
        let covered: Vec<usize> = leaves.iter().map(|t| t.index).collect();
        let missing = (0..n).find(|i| !covered.contains(i)).unwrap_or(0);
        return Err(ExportError::UncoveredToken(missing));
    }
    for (i, leaf) in leaves.iter().enumerate() {
        if leaf.index != i || leaf.text != doc.tokens[i].text {
            return Err(ExportError::UncoveredToken(i));
        }
    }
    Ok(tree)
}

/// Builds the subtree for `node`, given all remaining spans strictly inside
/// it (`rest`, outermost-first).
fn build_node(
    doc: &StandoffDoc,
    leaf_labels: &[Label],
    node: Span,
    rest: &[Span],
    branching: Branching,
) -> ParseTree {
    // Direct children: top-level spans inside `node`, plus uncovered tokens.
    let mut children: Vec<ParseTree> = Vec::new();
    let mut pos = node.start;
    let mut i = 0;
    while i < rest.len() {
        let child = rest[i];
        let inner_start = i + 1;
        let mut inner_end = inner_start;
        while inner_end < rest.len() && rest[inner_end].end <= child.end {
            inner_end += 1;
        }
        for t in pos..child.start {
            children.push(leaf(doc, leaf_labels, t));
        }
        children.push(build_node(doc, leaf_labels, child, &rest[inner_start..inner_end], branching));
        pos = child.end;
        i = inner_end;
    }
    for t in pos..node.end {
        children.push(leaf(doc, leaf_labels, t));
    }

    binarize(node.label, children, branching)
}

fn leaf(doc: &StandoffDoc, leaf_labels: &[Label], index: usize) -> ParseTree {
    ParseTree::leaf(leaf_labels[index], doc.tokens[index].clone())
}

fn is_separator_leaf(tree: &ParseTree) -> bool {
    match tree {
        ParseTree::Leaf { label, token } => {
            label.is_token_label() && label::is_separator_token(&token.text)
        }
        ParseTree::Internal { .. } => false,
    }
}

fn binarize(parent: Label, mut children: Vec<ParseTree>, branching: Branching) -> ParseTree {
    match children.len() {
        0 => unreachable!("a span always covers at least one token"),
        1 => children.pop().expect("one child"),
        2 => {
            let right = children.pop().expect("two children");
            let left = children.pop().expect("two children");
            ParseTree::internal(parent, left, right)
        }
        _ => {
            // A separator anywhere after the first child triggers the merge.
            if children.iter().skip(1).any(is_separator_leaf) {
                separator_merge(parent, children, branching)
            } else {
                cascade(parent, children, branching)
            }
        }
    }
}

/// Plain branching cascade; every created node carries the parent's label.
fn cascade(parent: Label, children: Vec<ParseTree>, branching: Branching) -> ParseTree {
    debug_assert!(children.len() >= 2);
    match branching {
        Branching::Left => {
            let mut it = children.into_iter();
            let mut acc = it.next().expect("nonempty");
            for child in it {
                acc = ParseTree::internal(parent, acc, child);
            }
            acc
        }
        Branching::Right => {
            let mut it = children.into_iter().rev();
            let mut acc = it.next().expect("nonempty");
            for child in it {
                acc = ParseTree::internal(parent, child, acc);
            }
            acc
        }
    }
}

/// Separator merge: each separator token absorbs the segment before it,
/// labeling the pair with the segment's `Separated` variant (or the parent
/// label when none exists). The resulting groups attach right-to-left.
fn separator_merge(parent: Label, children: Vec<ParseTree>, branching: Branching) -> ParseTree {
    let mut groups: Vec<ParseTree> = Vec::new();
    let mut current: Vec<ParseTree> = Vec::new();
    for child in children {
        if is_separator_leaf(&child) && !current.is_empty() {
            let content = if current.len() == 1 {
                current.pop().expect("one element")
            } else {
                cascade(parent, std::mem::take(&mut current), branching)
            };
            current.clear();
            let group_label = content.label().separated_variant().unwrap_or(parent);
            groups.push(ParseTree::internal(group_label, content, child));
        } else {
            current.push(child);
        }
    }
    if !current.is_empty() {
        groups.push(if current.len() == 1 {
            current.pop().expect("one element")
        } else {
            cascade(parent, current, branching)
        });
    }

    let mut it = groups.into_iter().rev();
    let mut acc = it.next().expect("at least one group");
    for group in it {
        acc = ParseTree::internal(parent, group, acc);
    }
    acc
}

/// Exports a named corpus. `Both` yields all left-branching trees followed
/// by all right-branching ones. Documents are processed in parallel but the
/// output order always matches the input order.
pub fn export_corpus(
    docs: &[(String, StandoffDoc)],
    branching: CorpusBranching,
) -> Result<Vec<ParseTree>, CorpusExportError> {
    let run = |b: Branching| -> Vec<(String, Result<ParseTree, ExportError>)> {
        docs.par_iter()
            .map(|(name, doc)| (name.clone(), export_tree(doc, b)))
            .collect()
    };
    let results: Vec<(String, Result<ParseTree, ExportError>)> = match branching {
        CorpusBranching::Left => run(Branching::Left),
        CorpusBranching::Right => run(Branching::Right),
        CorpusBranching::Both => {
            let mut all = run(Branching::Left);
            all.extend(run(Branching::Right));
            all
        }
    };

    let mut trees = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (name, result) in results {
        match result {
            Ok(tree) => trees.push(tree),
            Err(err) => failures.push((name, err)),
        }
    }
    if failures.is_empty() {
        Ok(trees)
    } else {
        Err(CorpusExportError { failures })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standoff::parse_standoff;

    fn doc(text: &str, ann: &str) -> StandoffDoc {
        parse_standoff(ann, text).unwrap()
    }

    #[test]
    fn left_branching_cascade_matches_published_example() {
        // A four-token condition binarized by left branching.
        let d = doc(
            "is always 1280 bits.",
            "T1\tCondition 0 19\tis always 1280 bits\n",
        );
        let tree = export_tree(&d, Branching::Left).unwrap();
        assert_eq!(
            tree.serialize_bracketed(),
            "(1 (8 (8 (8 (23 is) (23 always)) (23 1280)) (23 bits)) (3 .))"
        );
    }

    #[test]
    fn right_branching_cascade() {
        let d = doc("is always true.", "T1\tCondition 0 14\tis always true\n");
        let tree = export_tree(&d, Branching::Right).unwrap();
        assert_eq!(
            tree.serialize_bracketed(),
            "(1 (8 (23 is) (8 (23 always) (23 true))) (3 .))"
        );
    }

    #[test]
    fn statement_then_comma_becomes_separated_statement() {
        // Inside a 3-child node [Statement, ",", token] the separator merge
        // produces a SeparatedStatement over (Statement, Punct).
        let d = doc(
            "A holds, mostly.",
            "T1\tStatement 0 7\tA holds\nT2\tSentence 0 15\tA holds, mostly\n",
        );
        let tree = export_tree(&d, Branching::Left).unwrap();
        assert_eq!(
            tree.serialize_bracketed(),
            "(1 (20 (18 (10 (23 A) (23 holds)) (3 ,)) (23 mostly)) (3 .))"
        );
    }

    #[test]
    fn two_child_nodes_keep_their_own_label() {
        // With exactly two children there is no separator merge: the node
        // keeps its annotated label even when the right child is a comma.
        let d = doc(
            "For example, it holds.",
            "T1\tNon-causal 0 11\tFor example\nT2\tSentence 0 12\tFor example,\nT3\tStatement 13 21\tit holds\n",
        );
        let tree = export_tree(&d, Branching::Left).unwrap();
        assert_eq!(
            tree.serialize_bracketed(),
            "(1 (20 (20 (17 (23 For) (23 example)) (3 ,)) (10 (23 it) (23 holds))) (3 .))"
        );
    }

    #[test]
    fn exports_fail_without_final_punct() {
        let d = doc("A is true", "T1\tStatement 0 9\tA is true\n");
        assert_eq!(export_tree(&d, Branching::Left).unwrap_err(), ExportError::NoFinalPunct);
    }

    #[test]
    fn exports_fail_when_annotation_covers_final_punct() {
        let d = doc("A is true.", "T1\tStatement 0 10\tA is true.\n");
        assert_eq!(export_tree(&d, Branching::Left).unwrap_err(), ExportError::NoFinalPunct);
    }

    #[test]
    fn unannotated_sentence_still_exports() {
        let d = doc("it just works.", "");
        let tree = export_tree(&d, Branching::Left).unwrap();
        assert_eq!(
            tree.serialize_bracketed(),
            "(1 (20 (20 (23 it) (23 just)) (23 works)) (3 .))"
        );
        assert!(tree.validate_schema().is_empty());
    }

    #[test]
    fn both_mode_concatenates_left_then_right() {
        let d = doc("is always true.", "T1\tCondition 0 14\tis always true\n");
        let docs = vec![("a".to_string(), d.clone()), ("b".to_string(), d)];
        let trees = export_corpus(&docs, CorpusBranching::Both).unwrap();
        assert_eq!(trees.len(), 4);
        assert_eq!(trees[0], trees[1]);
        assert_eq!(trees[2], trees[3]);
        assert_ne!(trees[0], trees[2]);
    }

    #[test]
    fn corpus_errors_carry_document_names() {
        let good = doc("is always true.", "T1\tCondition 0 14\tis always true\n");
        let bad = doc("no punct here", "");
        let docs = vec![("good".to_string(), good), ("bad".to_string(), bad)];
        let err = export_corpus(&docs, CorpusBranching::Left).unwrap_err();
        assert_eq!(err.failures.len(), 1);
        assert_eq!(err.failures[0].0, "bad");
    }
}
