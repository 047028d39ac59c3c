//! Backpropagation through structure.
//!
//! Errors start at the root and travel down the tree: the derivative for
//! the shared parameters is the sum of per-node derivatives, the incoming
//! error of a node is the sum of the error sent down by its parent and the
//! node's own classification error, and the composition error splits into
//! a left and a right half for the two children.

use super::forward::{ForwardPass, NodeKind};
use super::{CompiledTree, Gradients, RntnParams};
use ndarray::{s, Array1, Array2, Axis};

/// Exact gradients of the [`super::forward_gold`] loss for `V`, `W`, `C`
/// and the embedding rows that occur in the tree.
pub fn backward(tree: &CompiledTree, pass: &ForwardPass, params: &RntnParams) -> Gradients {
    let d = params.dim();
    let mut grads = params.zero_gradients();
    let mut parent_error: Vec<Array1<f64>> = vec![Array1::zeros(d); tree.nodes.len()];

    // Reverse post-order visits every parent before its children.
    for idx in (0..tree.nodes.len()).rev() {
        let node = &tree.nodes[idx];
        let state = &pass.states[idx];

        // Classification error: softmax + cross-entropy at this node.
        let mut delta_class = state.label_probs.clone();
        delta_class[node.label.index()] -= 1.0;
        for (mut row, &dc) in grads.classifier.axis_iter_mut(Axis(0)).zip(delta_class.iter()) {
            row.scaled_add(dc, &state.vector);
        }

        // Incoming error: own classification error plus the parent's share.
        let delta = params.classifier.t().dot(&delta_class) + &parent_error[idx];

        match node.kind {
            NodeKind::Leaf { vocab_index } => {
                grads.embeddings.row_mut(vocab_index).scaled_add(1.0, &delta);
            }
            NodeKind::Internal { left, right } => {
                // Through tanh: delta_z = delta * (1 - p^2).
                let delta_z = &delta * &state.vector.mapv(|v| 1.0 - v * v);

                let mut x = Array1::zeros(2 * d);
                x.slice_mut(s![..d]).assign(&pass.states[left].vector);
                x.slice_mut(s![d..]).assign(&pass.states[right].vector);

                for (mut row, &dz) in grads.w.axis_iter_mut(Axis(0)).zip(delta_z.iter()) {
                    row.scaled_add(dz, &x);
                }

                // dL/dV[k] = delta_z[k] * x x^T; reuse the outer product.
                let xx = outer(&x, &x);
                for (mut slice, &dz) in
                    grads.tensor.axis_iter_mut(Axis(0)).zip(delta_z.iter())
                {
                    slice.scaled_add(dz, &xx);
                }

                // Error sent to the children:
                // W^T delta_z + (M + M^T) x with M = sum_k delta_z[k] V[k].
                let mut m = Array2::zeros((2 * d, 2 * d));
                for (slice, &dz) in params.tensor.axis_iter(Axis(0)).zip(delta_z.iter()) {
                    m.scaled_add(dz, &slice);
                }
                let delta_x = params.w.t().dot(&delta_z) + m.dot(&x) + m.t().dot(&x);
                parent_error[left] += &delta_x.slice(s![..d]);
                parent_error[right] += &delta_x.slice(s![d..]);
            }
        }
    }
    grads
}

fn outer(a: &Array1<f64>, b: &Array1<f64>) -> Array2<f64> {
    let mut out = Array2::zeros((a.len(), b.len()));
    for (mut row, &av) in out.axis_iter_mut(Axis(0)).zip(a.iter()) {
        row.scaled_add(av, b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{init_random, Vocab};
    use crate::label::Label;
    use crate::rntn::forward_gold;
    use crate::tree::ParseTree;

    fn setup(tree: &ParseTree, d: usize, seed: u64) -> RntnParams {
        let vocab = Vocab::from_trees([tree]);
        let mut params = RntnParams::init(init_random(vocab, d, 0.5, seed), 0.3, seed + 1);
        // Undo the identity offset so all parameters are plain random noise.
        for i in 0..d {
            params.w[[i, i]] -= 0.5;
            params.w[[i, i + d]] -= 0.5;
        }
        params
    }

    /// Central finite differences of the forward loss in one parameter.
    fn numeric_grad(
        tree: &CompiledTree,
        params: &mut RntnParams,
        write: impl Fn(&mut RntnParams, f64),
        read: impl Fn(&RntnParams) -> f64,
        eps: f64,
    ) -> f64 {
        let original = read(params);
        write(params, original + eps);
        let plus = forward_gold(tree, params).loss;
        write(params, original - eps);
        let minus = forward_gold(tree, params).loss;
        write(params, original);
        (plus - minus) / (2.0 * eps)
    }

    fn check_entry(analytic: f64, numeric: f64) {
        let scale = analytic.abs().max(numeric.abs());
        if scale < 1e-6 {
            assert!((analytic - numeric).abs() < 1e-8, "{analytic} vs {numeric}");
        } else {
            let rel = (analytic - numeric).abs() / scale;
            assert!(rel < 1e-4, "{analytic} vs {numeric} (rel {rel})");
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let tree = ParseTree::parse_bracketed("(11 (6 if) (10 (9 a) (8 (23 is) (23 set))))")
            .unwrap();
        let mut params = setup(&tree, 3, 11);
        let compiled = CompiledTree::compile(&tree, &params);
        let pass = forward_gold(&compiled, &params);
        let grads = backward(&compiled, &pass, &params);
        let eps = 1e-5;

        let d = params.dim();
        for k in 0..d {
            for i in 0..2 * d {
                for j in 0..2 * d {
                    let numeric = numeric_grad(
                        &compiled,
                        &mut params,
                        |p, v| p.tensor[[k, i, j]] = v,
                        |p| p.tensor[[k, i, j]],
                        eps,
                    );
                    check_entry(grads.tensor[[k, i, j]], numeric);
                }
            }
        }
        for i in 0..d {
            for j in 0..2 * d {
                let numeric = numeric_grad(
                    &compiled,
                    &mut params,
                    |p, v| p.w[[i, j]] = v,
                    |p| p.w[[i, j]],
                    eps,
                );
                check_entry(grads.w[[i, j]], numeric);
            }
        }
        for i in 0..Label::COUNT {
            for j in 0..d {
                let numeric = numeric_grad(
                    &compiled,
                    &mut params,
                    |p, v| p.classifier[[i, j]] = v,
                    |p| p.classifier[[i, j]],
                    eps,
                );
                check_entry(grads.classifier[[i, j]], numeric);
            }
        }
        for i in 0..params.embeddings.vocab.len() {
            for j in 0..d {
                let numeric = numeric_grad(
                    &compiled,
                    &mut params,
                    |p, v| p.embeddings.matrix[[i, j]] = v,
                    |p| p.embeddings.matrix[[i, j]],
                    eps,
                );
                check_entry(grads.embeddings[[i, j]], numeric);
            }
        }
    }

    #[test]
    fn single_leaf_has_zero_tensor_gradient() {
        let tree = ParseTree::parse_bracketed("(23 x)").unwrap();
        let params = setup(&tree, 4, 5);
        let compiled = CompiledTree::compile(&tree, &params);
        let pass = forward_gold(&compiled, &params);
        let grads = backward(&compiled, &pass, &params);
        assert!(grads.tensor.iter().all(|&g| g == 0.0));
        assert!(grads.w.iter().all(|&g| g == 0.0));
        assert!(grads.classifier.iter().any(|&g| g != 0.0));
    }

    #[test]
    fn near_zero_loss_gives_near_zero_gradients() {
        let tree = ParseTree::parse_bracketed("(23 x)").unwrap();
        let vocab = Vocab::from_trees([&tree]);
        let mut params = RntnParams::init(init_random(vocab, 2, 0.0001, 1), 0.0001, 2);
        params.embeddings.matrix.fill(1.0);
        params.classifier.fill(0.0);
        params.classifier.row_mut(Label::Word.index()).fill(100.0);
        let compiled = CompiledTree::compile(&tree, &params);
        let pass = forward_gold(&compiled, &params);
        let grads = backward(&compiled, &pass, &params);
        assert!(pass.loss < 1e-12);
        assert!(grads.classifier.iter().all(|&g| g.abs() < 1e-12));
        assert!(grads.embeddings.iter().all(|&g| g.abs() < 1e-12));
    }
}
