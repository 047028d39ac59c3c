//! Teacher-forced forward pass along a gold tree.

use super::{classify, compose_concat, RntnParams};
use crate::label::Label;
use crate::tree::ParseTree;
use ndarray::{s, Array1};

/// A gold tree flattened into post-order, with vocabulary indices resolved,
/// so repeated passes avoid re-walking the pointer structure.
#[derive(Debug, Clone)]
pub struct CompiledTree {
    pub nodes: Vec<CompiledNode>,
    pub token_count: usize,
}

#[derive(Debug, Clone)]
pub struct CompiledNode {
    pub label: Label,
    pub kind: NodeKind,
    /// Token span `[start, end)` of this node.
    pub span: (usize, usize),
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    Leaf { vocab_index: usize },
    Internal { left: usize, right: usize },
}

impl CompiledTree {
    /// Flattens a tree, resolving each leaf through the vocabulary
    /// (out-of-vocabulary words map to the UNK row).
    pub fn compile(tree: &ParseTree, params: &RntnParams) -> CompiledTree {
        let mut nodes = Vec::with_capacity(tree.node_count());
        let token_count = flatten(tree, params, 0, &mut nodes);
        CompiledTree { nodes, token_count }
    }

    /// Index of the root node (post-order puts it last).
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }
}

fn flatten(
    tree: &ParseTree,
    params: &RntnParams,
    offset: usize,
    out: &mut Vec<CompiledNode>,
) -> usize {
    match tree {
        ParseTree::Leaf { label, token } => {
            out.push(CompiledNode {
                label: *label,
                kind: NodeKind::Leaf { vocab_index: params.embeddings.vocab.lookup(&token.text) },
                span: (offset, offset + 1),
            });
            offset + 1
        }
        ParseTree::Internal { label, left, right } => {
            let mid = flatten(left, params, offset, out);
            let left_idx = out.len() - 1;
            let end = flatten(right, params, mid, out);
            let right_idx = out.len() - 1;
            out.push(CompiledNode {
                label: *label,
                kind: NodeKind::Internal { left: left_idx, right: right_idx },
                span: (offset, end),
            });
            end
        }
    }
}

/// Vector, label distribution and span of one node.
#[derive(Debug, Clone)]
pub struct NodeState {
    pub vector: Array1<f64>,
    pub label_probs: Array1<f64>,
    pub span: (usize, usize),
}

/// Result of a teacher-forced pass: one state per node (post-order) and the
/// summed cross-entropy loss over all `2n - 1` nodes.
#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub states: Vec<NodeState>,
    pub loss: f64,
    /// Nodes whose gold label is the argmax of their distribution.
    pub correct_nodes: usize,
}

/// Composes vectors along the gold structure and accumulates
/// `-log p(gold label)` at every node, leaves included.
pub fn forward_gold(tree: &CompiledTree, params: &RntnParams) -> ForwardPass {
    let d = params.dim();
    let mut states: Vec<NodeState> = Vec::with_capacity(tree.nodes.len());
    let mut loss = 0.0;
    let mut correct = 0;
    for node in &tree.nodes {
        let vector = match node.kind {
            NodeKind::Leaf { vocab_index } => params.embeddings.matrix.row(vocab_index).to_owned(),
            NodeKind::Internal { left, right } => {
                let mut x = Array1::zeros(2 * d);
                x.slice_mut(s![..d]).assign(&states[left].vector);
                x.slice_mut(s![d..]).assign(&states[right].vector);
                compose_concat(&x, params)
            }
        };
        let label_probs = classify(vector.view(), params);
        let gold = node.label.index();
        loss -= label_probs[gold].max(f64::MIN_POSITIVE).ln();
        if argmax(&label_probs) == gold {
            correct += 1;
        }
        states.push(NodeState { vector, label_probs, span: node.span });
    }
    ForwardPass { states, loss, correct_nodes: correct }
}

/// Index of the largest entry; ties break toward the lowest index.
pub(crate) fn argmax(values: &Array1<f64>) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{init_random, Vocab};
    use crate::tree::ParseTree;

    fn params_for(tree: &ParseTree, d: usize) -> RntnParams {
        let vocab = Vocab::from_trees([tree]);
        RntnParams::init(init_random(vocab, d, 0.0001, 3), 0.0001, 4)
    }

    #[test]
    fn uniform_classifier_loss_is_nodes_times_ln27() {
        let tree = ParseTree::parse_bracketed("(8 (23 is) (23 true))").unwrap();
        let mut params = params_for(&tree, 4);
        params.classifier.fill(0.0);
        let compiled = CompiledTree::compile(&tree, &params);
        let pass = forward_gold(&compiled, &params);
        let expected = 3.0 * 27.0f64.ln();
        assert!((pass.loss - expected).abs() < 1e-9, "{} vs {expected}", pass.loss);
        assert!((pass.loss - 9.8875).abs() < 1e-4);
    }

    #[test]
    fn perfect_classifier_approaches_zero_loss() {
        let tree = ParseTree::parse_bracketed("(23 x)").unwrap();
        let mut params = params_for(&tree, 2);
        // Drive the Word logit far above everything else for every vector.
        params.embeddings.matrix.fill(1.0);
        params.classifier.fill(0.0);
        params
            .classifier
            .row_mut(crate::label::Label::Word.index())
            .fill(60.0);
        let compiled = CompiledTree::compile(&tree, &params);
        let pass = forward_gold(&compiled, &params);
        assert!(pass.loss >= 0.0);
        assert!(pass.loss < 1e-9, "loss {}", pass.loss);
        assert_eq!(pass.correct_nodes, 1);
    }

    #[test]
    fn loss_decreases_in_gold_logit() {
        let tree = ParseTree::parse_bracketed("(23 x)").unwrap();
        let mut last = f64::INFINITY;
        for boost in [0.0, 0.5, 1.0, 2.0] {
            let mut params = params_for(&tree, 2);
            params.embeddings.matrix.fill(1.0);
            params.classifier.fill(0.0);
            params.classifier.row_mut(crate::label::Label::Word.index()).fill(boost);
            let compiled = CompiledTree::compile(&tree, &params);
            let pass = forward_gold(&compiled, &params);
            assert!(pass.loss < last, "loss must fall as the gold logit grows");
            last = pass.loss;
        }
    }

    #[test]
    fn spans_follow_the_gold_structure() {
        let tree =
            ParseTree::parse_bracketed("(8 (8 (23 is) (23 always)) (23 true))").unwrap();
        let params = params_for(&tree, 3);
        let compiled = CompiledTree::compile(&tree, &params);
        assert_eq!(compiled.token_count, 3);
        let pass = forward_gold(&compiled, &params);
        let spans: Vec<(usize, usize)> = pass.states.iter().map(|s| s.span).collect();
        assert_eq!(spans, vec![(0, 1), (1, 2), (0, 2), (2, 3), (0, 3)]);
        for state in &pass.states {
            assert!((state.label_probs.sum() - 1.0).abs() < 1e-9);
        }
    }
}
