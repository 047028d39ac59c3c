//! Word vectors: trainable randomly initialized tables and frozen
//! POS-enriched concatenations of pre-trained vectors.

use crate::tree::{ParseTree, Token};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use thiserror::Error;

/// Placeholder for out-of-vocabulary words. Its row is trained like any
/// other when the table is trainable.
pub const UNK: &str = "<unk>";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("vector for {word:?} has {found} dims, expected {expected}")]
    DimMismatch { word: String, found: usize, expected: usize },
    #[error("malformed vector on line {0}")]
    MalformedVector(usize),
    #[error("input vector too short: need {needed}, got {got}")]
    ShortInput { needed: usize, got: usize },
    #[error("token list is empty")]
    EmptyInput,
    #[error("pos dims {pos} + pretrained dims {pretrained} != {d}")]
    BadWeighting { pos: usize, pretrained: usize, d: usize },
}

/// A word-to-index mapping with a dedicated [`UNK`] entry at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    /// Builds a vocabulary from words in first-seen order. [`UNK`] is always
    /// present exactly once, at index 0.
    pub fn from_words<I, S>(words: I) -> Vocab
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Vocab { words: Vec::new(), index: HashMap::new() };
        vocab.insert(UNK);
        for word in words {
            vocab.insert(word.as_ref());
        }
        vocab
    }

    /// Vocabulary over all leaf tokens of a treebank.
    pub fn from_trees<'a, I: IntoIterator<Item = &'a ParseTree>>(trees: I) -> Vocab {
        Vocab::from_words(
            trees
                .into_iter()
                .flat_map(|t| t.leaves().into_iter().map(|tok| tok.text.clone()))
                .collect::<Vec<_>>(),
        )
    }

    fn insert(&mut self, word: &str) {
        if !self.index.contains_key(word) {
            self.index.insert(word.to_string(), self.words.len());
            self.words.push(word.to_string());
        }
    }

    /// Index of a word; unknown words map to [`UNK`].
    pub fn lookup(&self, word: &str) -> usize {
        self.index.get(word).copied().unwrap_or(0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false // UNK is always present
    }
}

/// A |vocab| x d matrix of word vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub vocab: Vocab,
    pub matrix: Array2<f64>,
    pub trainable: bool,
}

impl EmbeddingTable {
    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    /// Row for a word, falling back to the [`UNK`] row.
    pub fn lookup(&self, word: &str) -> ndarray::ArrayView1<'_, f64> {
        self.matrix.row(self.vocab.lookup(word))
    }
}

/// Random trainable table with entries drawn from U(-r, r). Deterministic
/// and byte-identical for a fixed (vocab, d, r, seed).
pub fn init_random(vocab: Vocab, d: usize, r: f64, seed: u64) -> EmbeddingTable {
    assert!(d > 0 && r > 0.0, "init_random needs d > 0 and r > 0");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = Array2::from_shape_fn((vocab.len(), d), |_| rng.random_range(-r..r));
    EmbeddingTable { vocab, matrix, trainable: true }
}

/// Loads pre-trained vectors (`word v1 .. v_dims` per line) for a
/// vocabulary. Words without a vector get a zero row and are returned in
/// the report. The resulting table is frozen.
pub fn load_pretrained<R: BufRead>(
    reader: R,
    vocab: Vocab,
    dims: usize,
) -> Result<(EmbeddingTable, Vec<String>), EmbeddingError> {
    let mut matrix = Array2::zeros((vocab.len(), dims));
    let mut filled = vec![false; vocab.len()];
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|_| EmbeddingError::MalformedVector(i + 1))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().ok_or(EmbeddingError::MalformedVector(i + 1))?;
        let values: Vec<f64> = parts
            .map(|v| v.parse::<f64>().map_err(|_| EmbeddingError::MalformedVector(i + 1)))
            .collect::<Result<_, _>>()?;
        if values.len() != dims {
            return Err(EmbeddingError::DimMismatch {
                word: word.to_string(),
                found: values.len(),
                expected: dims,
            });
        }
        if vocab.contains(word) {
            let idx = vocab.lookup(word);
            for (j, v) in values.into_iter().enumerate() {
                matrix[[idx, j]] = v;
            }
            filled[idx] = true;
        }
    }
    let missing = vocab
        .words()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !filled[i])
        .map(|(_, w)| w.clone())
        .collect();
    Ok((EmbeddingTable { vocab, matrix, trainable: false }, missing))
}

/// Part-of-speech tags of the built-in tagger and of sidecar files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosTag {
    Det,
    Noun,
    Verb,
    Aux,
    Adj,
    Adv,
    Pron,
    Adp,
    Conj,
    Num,
    Part,
    Punct,
    Sym,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 14] = [
        PosTag::Det,
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Aux,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Adp,
        PosTag::Conj,
        PosTag::Num,
        PosTag::Part,
        PosTag::Punct,
        PosTag::Sym,
        PosTag::Other,
    ];

    pub fn index(self) -> usize {
        PosTag::ALL.iter().position(|&t| t == self).expect("tag listed in ALL")
    }

    pub fn name(self) -> &'static str {
        match self {
            PosTag::Det => "DET",
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Aux => "AUX",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Adp => "ADP",
            PosTag::Conj => "CONJ",
            PosTag::Num => "NUM",
            PosTag::Part => "PART",
            PosTag::Punct => "PUNCT",
            PosTag::Sym => "SYM",
            PosTag::Other => "X",
        }
    }

    pub fn from_name(name: &str) -> Option<PosTag> {
        let up = name.to_ascii_uppercase();
        PosTag::ALL.iter().copied().find(|t| t.name() == up)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deterministic lexicon + suffix fallback tagger. Unknown words are tagged
/// NOUN. This exists so the POS pipeline runs without an external tagger;
/// a sidecar file takes precedence when provided.
pub fn tag_pos(tokens: &[Token]) -> Result<Vec<PosTag>, EmbeddingError> {
    if tokens.is_empty() {
        return Err(EmbeddingError::EmptyInput);
    }
    Ok(tokens.iter().map(|t| tag_word(&t.text)).collect())
}

pub fn tag_word(word: &str) -> PosTag {
    let lower = word.to_ascii_lowercase();
    match lower.as_str() {
        "the" | "a" | "an" | "this" | "that" | "these" | "those" | "each" | "every" | "any"
        | "all" | "some" | "no" => return PosTag::Det,
        "is" | "are" | "was" | "were" | "be" | "been" | "being" | "am" | "shall" | "should"
        | "will" | "would" | "can" | "could" | "may" | "might" | "must" | "do" | "does"
        | "did" | "has" | "have" | "had" => return PosTag::Aux,
        "and" | "or" | "but" | "nor" | "if" | "when" | "then" | "while" | "because" | "since"
        | "unless" | "until" | "whether" | "although" => return PosTag::Conj,
        "in" | "of" | "to" | "for" | "on" | "at" | "by" | "with" | "from" | "into" | "over"
        | "under" | "between" | "after" | "before" | "during" | "within" | "without" => {
            return PosTag::Adp
        }
        "not" | "n't" | "never" => return PosTag::Part,
        "it" | "he" | "she" | "they" | "we" | "you" | "i" | "its" | "their" | "his" | "her"
        | "who" | "which" | "what" => return PosTag::Pron,
        "always" | "only" | "also" | "very" | "too" | "more" | "most" | "less" | "least"
        | "than" => return PosTag::Adv,
        _ => {}
    }
    if lower.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-' | '+'))
        && lower.chars().any(|c| c.is_ascii_digit())
    {
        return PosTag::Num;
    }
    match crate::label::token_label(word) {
        crate::label::Label::Punct => return PosTag::Punct,
        crate::label::Label::Symbol => return PosTag::Sym,
        _ => {}
    }
    if lower.ends_with("ly") {
        PosTag::Adv
    } else if lower.ends_with("ing") || lower.ends_with("ed") || lower.ends_with("ize") {
        PosTag::Verb
    } else if lower.ends_with("ous")
        || lower.ends_with("ive")
        || lower.ends_with("able")
        || lower.ends_with("ible")
        || lower.ends_with("ful")
        || lower.ends_with("less")
        || lower.ends_with("ic")
        || lower.ends_with("al")
    {
        PosTag::Adj
    } else {
        PosTag::Noun
    }
}

/// Parses a POS sidecar file (`token<TAB>TAG` per line, aligned to corpus
/// order) into a token-to-tag map; the first tag seen for a token wins.
pub fn parse_pos_sidecar(text: &str) -> Result<HashMap<String, PosTag>, EmbeddingError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (token, tag) = line.split_once('\t').ok_or(EmbeddingError::MalformedVector(i + 1))?;
        let tag = PosTag::from_name(tag.trim()).ok_or(EmbeddingError::MalformedVector(i + 1))?;
        map.entry(token.to_string()).or_insert(tag);
    }
    Ok(map)
}

/// How the final d dimensions split between the POS part (first) and the
/// pre-trained part (second).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PosWeighting {
    pub pos_dims: usize,
    pub pretrained_dims: usize,
}

impl PosWeighting {
    pub fn new(pos_dims: usize, pretrained_dims: usize) -> PosWeighting {
        PosWeighting { pos_dims, pretrained_dims }
    }

    /// Equal split, e.g. (30, 30) for d = 60.
    pub fn fifty_fifty(d: usize) -> PosWeighting {
        PosWeighting::new(d / 2, d - d / 2)
    }

    /// POS-heavy split, e.g. (45, 15) for d = 60.
    pub fn seventy_five(d: usize) -> PosWeighting {
        let pos = (3 * d) / 4;
        PosWeighting::new(pos, d - pos)
    }

    /// POS only, e.g. (60, 0) for d = 60.
    pub fn pos_only(d: usize) -> PosWeighting {
        PosWeighting::new(d, 0)
    }

    pub fn total(&self) -> usize {
        self.pos_dims + self.pretrained_dims
    }
}

/// One-hot POS vector, zero-padded or truncated to `dims`.
pub fn pos_one_hot(tag: PosTag, dims: usize) -> Vec<f64> {
    let mut v = vec![0.0; dims];
    if tag.index() < dims {
        v[tag.index()] = 1.0;
    }
    v
}

/// Concatenates the first `pos_dims` entries of `pos_vec` with the first
/// `pretrained_dims` entries of `word_vec`, POS part first.
pub fn pos_concat(
    word_vec: &[f64],
    pos_vec: &[f64],
    weighting: PosWeighting,
) -> Result<Vec<f64>, EmbeddingError> {
    if pos_vec.len() < weighting.pos_dims {
        return Err(EmbeddingError::ShortInput { needed: weighting.pos_dims, got: pos_vec.len() });
    }
    if word_vec.len() < weighting.pretrained_dims {
        return Err(EmbeddingError::ShortInput {
            needed: weighting.pretrained_dims,
            got: word_vec.len(),
        });
    }
    let mut out = Vec::with_capacity(weighting.total());
    out.extend_from_slice(&pos_vec[..weighting.pos_dims]);
    out.extend_from_slice(&word_vec[..weighting.pretrained_dims]);
    Ok(out)
}

/// Builds a frozen POS-enriched table: every row is the one-hot POS vector
/// of the word's tag followed by its pre-trained vector prefix. Tags come
/// from `overrides` when present, otherwise from the fallback tagger.
pub fn build_pos_table(
    pretrained: &EmbeddingTable,
    weighting: PosWeighting,
    overrides: &HashMap<String, PosTag>,
) -> Result<EmbeddingTable, EmbeddingError> {
    if pretrained.dim() < weighting.pretrained_dims {
        return Err(EmbeddingError::ShortInput {
            needed: weighting.pretrained_dims,
            got: pretrained.dim(),
        });
    }
    let d = weighting.total();
    let vocab = pretrained.vocab.clone();
    let mut matrix = Array2::zeros((vocab.len(), d));
    for (i, word) in vocab.words().iter().enumerate() {
        let tag = overrides.get(word).copied().unwrap_or_else(|| tag_word(word));
        let pos = pos_one_hot(tag, weighting.pos_dims);
        let row = pos_concat(
            pretrained.matrix.row(i).as_slice().expect("contiguous row"),
            &pos,
            weighting,
        )?;
        for (j, v) in row.into_iter().enumerate() {
            matrix[[i, j]] = v;
        }
    }
    Ok(EmbeddingTable { vocab, matrix, trainable: false })
}
