//! Fine-grained causality extraction from natural-language requirements.
//!
//! The crate covers the full pipeline around a recursive neural tensor
//! network over fully labeled binary parse trees:
//!
//! - [`label`] / [`tree`] / [`treebank`]: the 27-label schema, binary parse
//!   trees and the bracketed one-tree-per-line text format.
//! - [`standoff`] / [`export`]: ingestion of brat standoff annotations and
//!   their conversion to binary trees with left or right branching.
//! - [`embedding`]: trainable random word vectors and frozen POS-enriched
//!   concatenations of pre-trained vectors.
//! - [`rntn`]: tensor composition, node classification, greedy bottom-up
//!   parsing, backpropagation through structure, AdaGrad and checkpoints.
//! - [`split`] / [`train`] / [`metrics`]: dataset splitting, the training
//!   loop, and evaluation (node accuracy, per-label P/R/F1, cumulative
//!   n-gram accuracy, inter-annotator agreement).

pub mod embedding;
pub mod export;
pub mod label;
pub mod metrics;
pub mod rntn;
pub mod split;
pub mod standoff;
pub mod train;
pub mod tree;
pub mod treebank;

pub use embedding::{EmbeddingTable, PosTag, PosWeighting, Vocab};
pub use export::{export_corpus, export_tree, Branching, CorpusBranching, ExportError};
pub use label::Label;
pub use metrics::{f1_score, AgreementReport, EvalReport, TreebankStats};
pub use rntn::{Checkpoint, Gradients, MergeScore, RntnParams};
pub use split::SplitSpec;
pub use standoff::{SpanAnnotation, StandoffDoc};
pub use train::{EmbeddingMode, EpochLog, TrainConfig};
pub use tree::{ParseTree, SchemaViolation, Token, TreeError};
