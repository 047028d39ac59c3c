//! The recursive neural tensor network.
//!
//! A node pair `(v_i, v_j)` composes into a parent vector
//! `p = f(x^T V x + W x)` with `x = [v_i; v_j]`, a tensor
//! `V in R^{2d x 2d x d}` and a matrix `W in R^{d x 2d}`; `f` is tanh.
//! Every node vector is classified by `softmax(C p)` with
//! `C in R^{L x d}`, one row per label.

mod adagrad;
mod backward;
mod checkpoint;
mod forward;
mod greedy;

pub use adagrad::{adagrad_step, AdaGradState};
pub use backward::backward;
pub use checkpoint::{Checkpoint, CheckpointError, CheckpointMeta, FORMAT_VERSION};
pub use forward::{forward_gold, CompiledTree, ForwardPass, NodeState};
pub use greedy::{greedy_parse, MergeScore};

use crate::embedding::EmbeddingTable;
use crate::label::Label;
use ndarray::{Array1, Array2, Array3, ArrayView1, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RntnError {
    #[error("cannot parse an empty token sequence")]
    EmptyInput,
}

/// All trainable parameters of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct RntnParams {
    /// Composition tensor, `d` slices of shape `2d x 2d`.
    pub tensor: Array3<f64>,
    /// Composition matrix, `d x 2d`.
    pub w: Array2<f64>,
    /// Classification matrix, one row per label: `L x d`.
    pub classifier: Array2<f64>,
    pub embeddings: EmbeddingTable,
}

impl RntnParams {
    /// Word vector dimension.
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn label_count(&self) -> usize {
        self.classifier.nrows()
    }

    /// Fresh parameters around an embedding table. The tensor and the
    /// classifier start near zero; `W` starts as the averaging map
    /// `0.5 [I I]` plus noise so composed vectors stay in the scale of the
    /// word vectors from the first epoch on.
    pub fn init(embeddings: EmbeddingTable, r: f64, seed: u64) -> RntnParams {
        let d = embeddings.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tensor = Array3::from_shape_fn((d, 2 * d, 2 * d), |_| rng.random_range(-r..r));
        let mut w = Array2::from_shape_fn((d, 2 * d), |_| rng.random_range(-r..r));
        for i in 0..d {
            w[[i, i]] += 0.5;
            w[[i, i + d]] += 0.5;
        }
        let classifier = Array2::from_shape_fn((Label::COUNT, d), |_| rng.random_range(-r..r));
        RntnParams { tensor, w, classifier, embeddings }
    }

    /// Zeroed gradients with matching shapes.
    pub fn zero_gradients(&self) -> Gradients {
        Gradients {
            tensor: Array3::zeros(self.tensor.raw_dim()),
            w: Array2::zeros(self.w.raw_dim()),
            classifier: Array2::zeros(self.classifier.raw_dim()),
            embeddings: Array2::zeros(self.embeddings.matrix.raw_dim()),
        }
    }
}

/// Gradients of the gold-tree loss with respect to every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub tensor: Array3<f64>,
    pub w: Array2<f64>,
    pub classifier: Array2<f64>,
    pub embeddings: Array2<f64>,
}

impl Gradients {
    pub fn add_assign(&mut self, other: &Gradients) {
        self.tensor += &other.tensor;
        self.w += &other.w;
        self.classifier += &other.classifier;
        self.embeddings += &other.embeddings;
    }

    pub fn scale(&mut self, factor: f64) {
        self.tensor *= factor;
        self.w *= factor;
        self.classifier *= factor;
        self.embeddings *= factor;
    }
}

/// Composes two child vectors into their parent representation:
/// `p[k] = tanh(x^T V[k] x + (W x)[k])` with `x = [v_i; v_j]`.
pub fn compose(vi: ArrayView1<f64>, vj: ArrayView1<f64>, params: &RntnParams) -> Array1<f64> {
    let d = params.dim();
    debug_assert_eq!(vi.len(), d);
    debug_assert_eq!(vj.len(), d);
    let mut x = Array1::zeros(2 * d);
    x.slice_mut(ndarray::s![..d]).assign(&vi);
    x.slice_mut(ndarray::s![d..]).assign(&vj);
    compose_concat(&x, params)
}

/// Like [`compose`], on an already concatenated `x`.
pub(crate) fn compose_concat(x: &Array1<f64>, params: &RntnParams) -> Array1<f64> {
    let mut z = params.w.dot(x);
    for (k, slice) in params.tensor.axis_iter(Axis(0)).enumerate() {
        z[k] += x.dot(&slice.dot(x));
    }
    z.mapv_into(f64::tanh)
}

/// Numerically stable softmax of `C p`, one probability per label.
pub fn classify(p: ArrayView1<f64>, params: &RntnParams) -> Array1<f64> {
    softmax(params.classifier.dot(&p))
}

pub(crate) fn softmax(logits: Array1<f64>) -> Array1<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = logits.mapv(|v| (v - max).exp());
    let sum = out.sum();
    out /= sum;
    out
}
