//! The 27 segment labels of the causality treebank.
//!
//! Numeric IDs are the ones used in the bracketed treebank format. Sixteen of
//! them are fixed by published bracketed data; the remaining eleven take the
//! lowest unused integers in listing order (manual labels first, then the
//! `Separated` family), so every integer in `1..=27` is assigned exactly once.

use std::fmt;

/// A node category. The discriminant is the stable numeric ID used in the
/// bracketed serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Label {
    RootSentence = 1,
    Symbol = 2,
    Punct = 3,
    And = 4,
    Or = 5,
    KeyC = 6,
    KeyNc = 7,
    Condition = 8,
    Variable = 9,
    Statement = 10,
    Cause = 11,
    Effect = 12,
    CauseEffectRelation = 13,
    SeparatedCause = 14,
    Insertion = 15,
    Negation = 16,
    NonCausal = 17,
    SeparatedStatement = 18,
    SeparatedAnd = 19,
    Sentence = 20,
    SeparatedCauseEffectRelation = 21,
    SeparatedNegation = 22,
    Word = 23,
    SeparatedNonCausal = 24,
    SeparatedOr = 25,
    SeparatedEffect = 26,
    SeparatedVariable = 27,
}

impl Label {
    /// Number of labels in the schema.
    pub const COUNT: usize = 27;

    /// All labels in ID order.
    pub const ALL: [Label; Label::COUNT] = [
        Label::RootSentence,
        Label::Symbol,
        Label::Punct,
        Label::And,
        Label::Or,
        Label::KeyC,
        Label::KeyNc,
        Label::Condition,
        Label::Variable,
        Label::Statement,
        Label::Cause,
        Label::Effect,
        Label::CauseEffectRelation,
        Label::SeparatedCause,
        Label::Insertion,
        Label::Negation,
        Label::NonCausal,
        Label::SeparatedStatement,
        Label::SeparatedAnd,
        Label::Sentence,
        Label::SeparatedCauseEffectRelation,
        Label::SeparatedNegation,
        Label::Word,
        Label::SeparatedNonCausal,
        Label::SeparatedOr,
        Label::SeparatedEffect,
        Label::SeparatedVariable,
    ];

    /// Numeric ID used in the bracketed format (1..=27).
    pub fn id(self) -> u8 {
        self as u8
    }

    /// Zero-based dense index (`id - 1`), used to address classifier rows.
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_id(id: u32) -> Option<Label> {
        Label::ALL.get(id.checked_sub(1)? as usize).copied()
    }

    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::RootSentence => "RootSentence",
            Label::Symbol => "Symbol",
            Label::Punct => "Punct",
            Label::And => "And",
            Label::Or => "Or",
            Label::KeyC => "Key-C",
            Label::KeyNc => "Key-NC",
            Label::Condition => "Condition",
            Label::Variable => "Variable",
            Label::Statement => "Statement",
            Label::Cause => "Cause",
            Label::Effect => "Effect",
            Label::CauseEffectRelation => "CauseEffectRelation",
            Label::SeparatedCause => "SeparatedCause",
            Label::Insertion => "Insertion",
            Label::Negation => "Negation",
            Label::NonCausal => "Non-causal",
            Label::SeparatedStatement => "SeparatedStatement",
            Label::SeparatedAnd => "SeparatedAnd",
            Label::Sentence => "Sentence",
            Label::SeparatedCauseEffectRelation => "SeparatedCauseEffectRelation",
            Label::SeparatedNegation => "SeparatedNegation",
            Label::Word => "Word",
            Label::SeparatedNonCausal => "SeparatedNonCausal",
            Label::SeparatedOr => "SeparatedOr",
            Label::SeparatedEffect => "SeparatedEffect",
            Label::SeparatedVariable => "SeparatedVariable",
        }
    }

    /// Parses a label name as found in annotation files. Hyphens, underscores,
    /// spaces and case are ignored; the historical "Seperated" spelling is
    /// accepted as well.
    pub fn from_name(name: &str) -> Option<Label> {
        let key: String = name
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        let key = key.replace("seperated", "separated");
        match key.as_str() {
            "rootsentence" => Some(Label::RootSentence),
            "symbol" => Some(Label::Symbol),
            "punct" => Some(Label::Punct),
            "and" => Some(Label::And),
            "or" => Some(Label::Or),
            "keyc" => Some(Label::KeyC),
            "keync" => Some(Label::KeyNc),
            "condition" => Some(Label::Condition),
            "variable" => Some(Label::Variable),
            "statement" => Some(Label::Statement),
            "cause" => Some(Label::Cause),
            "effect" => Some(Label::Effect),
            "causeeffectrelation" => Some(Label::CauseEffectRelation),
            "separatedcause" => Some(Label::SeparatedCause),
            "insertion" => Some(Label::Insertion),
            "negation" => Some(Label::Negation),
            "noncausal" => Some(Label::NonCausal),
            "separatedstatement" => Some(Label::SeparatedStatement),
            "separatedand" => Some(Label::SeparatedAnd),
            "sentence" => Some(Label::Sentence),
            "separatedcauseeffectrelation" => Some(Label::SeparatedCauseEffectRelation),
            "separatednegation" => Some(Label::SeparatedNegation),
            "word" => Some(Label::Word),
            "separatednoncausal" => Some(Label::SeparatedNonCausal),
            "separatedor" => Some(Label::SeparatedOr),
            "separatedeffect" => Some(Label::SeparatedEffect),
            "separatedvariable" => Some(Label::SeparatedVariable),
            _ => None,
        }
    }

    /// True for the 15 labels assigned by annotators.
    pub fn is_manual(self) -> bool {
        matches!(
            self,
            Label::Variable
                | Label::Condition
                | Label::Negation
                | Label::Statement
                | Label::NonCausal
                | Label::KeyC
                | Label::Cause
                | Label::Effect
                | Label::CauseEffectRelation
                | Label::And
                | Label::Or
                | Label::RootSentence
                | Label::KeyNc
                | Label::Insertion
                | Label::Sentence
        )
    }

    /// True for the 12 labels produced automatically by the exporter.
    pub fn is_automatic(self) -> bool {
        !self.is_manual()
    }

    /// Labels assigned to bare tokens by the exporter.
    pub fn is_token_label(self) -> bool {
        matches!(self, Label::Word | Label::Punct | Label::Symbol)
    }

    /// Labels that can only ever dominate at least two tokens, so they are
    /// illegal on a leaf. Single-token annotations (a lone `Variable` or
    /// `Key-C`) are legal leaves, as the published treebank shows.
    pub fn is_internal_only(self) -> bool {
        matches!(
            self,
            Label::RootSentence
                | Label::Sentence
                | Label::Statement
                | Label::Cause
                | Label::Effect
                | Label::CauseEffectRelation
                | Label::And
                | Label::Or
        ) || self.separated_base().is_some()
    }

    /// The `Separated` variant a label turns into when merged with a
    /// following separator token, if one exists.
    pub fn separated_variant(self) -> Option<Label> {
        Some(match self {
            Label::Cause => Label::SeparatedCause,
            Label::Statement => Label::SeparatedStatement,
            Label::And => Label::SeparatedAnd,
            Label::CauseEffectRelation => Label::SeparatedCauseEffectRelation,
            Label::Negation => Label::SeparatedNegation,
            Label::NonCausal => Label::SeparatedNonCausal,
            Label::Or => Label::SeparatedOr,
            Label::Effect => Label::SeparatedEffect,
            Label::Variable => Label::SeparatedVariable,
            _ => return None,
        })
    }

    /// Inverse of [`Label::separated_variant`].
    pub fn separated_base(self) -> Option<Label> {
        Some(match self {
            Label::SeparatedCause => Label::Cause,
            Label::SeparatedStatement => Label::Statement,
            Label::SeparatedAnd => Label::And,
            Label::SeparatedCauseEffectRelation => Label::CauseEffectRelation,
            Label::SeparatedNegation => Label::Negation,
            Label::SeparatedNonCausal => Label::NonCausal,
            Label::SeparatedOr => Label::Or,
            Label::SeparatedEffect => Label::Effect,
            Label::SeparatedVariable => Label::Variable,
            _ => return None,
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Token-level label for a bare token: `Punct` for punctuation marks,
/// `Symbol` for other non-alphanumeric tokens, `Word` otherwise.
pub fn token_label(text: &str) -> Label {
    if !text.is_empty() && text.chars().all(|c| matches!(c, '.' | ',' | ';' | '!' | '?')) {
        Label::Punct
    } else if !text.chars().any(char::is_alphanumeric) {
        Label::Symbol
    } else {
        Label::Word
    }
}

/// Separator tokens trigger the exporter's separator merge.
pub fn is_separator_token(text: &str) -> bool {
    matches!(text, "," | ":" | ";")
}

/// Tokens that may terminate a sentence.
pub fn is_sentence_final_token(text: &str) -> bool {
    token_label(text) == Label::Punct
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_dense_and_distinct() {
        let mut seen = [false; Label::COUNT + 1];
        for label in Label::ALL {
            let id = label.id() as usize;
            assert!((1..=Label::COUNT).contains(&id));
            assert!(!seen[id], "duplicate id {id}");
            seen[id] = true;
        }
    }

    #[test]
    fn published_ids_are_honored() {
        // These sixteen assignments are fixed by the published bracketed data
        // and must never change.
        let pinned = [
            (Label::RootSentence, 1),
            (Label::Symbol, 2),
            (Label::Punct, 3),
            (Label::And, 4),
            (Label::KeyC, 6),
            (Label::Condition, 8),
            (Label::Variable, 9),
            (Label::Statement, 10),
            (Label::Cause, 11),
            (Label::Effect, 12),
            (Label::CauseEffectRelation, 13),
            (Label::SeparatedCause, 14),
            (Label::Negation, 16),
            (Label::NonCausal, 17),
            (Label::Sentence, 20),
            (Label::Word, 23),
        ];
        for (label, id) in pinned {
            assert_eq!(label.id(), id, "{label}");
        }
    }

    #[test]
    fn fifteen_manual_twelve_automatic() {
        assert_eq!(Label::ALL.iter().filter(|l| l.is_manual()).count(), 15);
        assert_eq!(Label::ALL.iter().filter(|l| l.is_automatic()).count(), 12);
    }

    #[test]
    fn separated_variants_round_trip() {
        let mut count = 0;
        for label in Label::ALL {
            if let Some(sep) = label.separated_variant() {
                assert_eq!(sep.separated_base(), Some(label));
                count += 1;
            }
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn name_round_trip() {
        for label in Label::ALL {
            assert_eq!(Label::from_name(label.name()), Some(label));
        }
        assert_eq!(Label::from_name("Cause_Effect_Relation"), Some(Label::CauseEffectRelation));
        assert_eq!(Label::from_name("SeperatedCause"), Some(Label::SeparatedCause));
        assert_eq!(Label::from_name("nonsense"), None);
    }

    #[test]
    fn token_labels() {
        assert_eq!(token_label("bits"), Label::Word);
        assert_eq!(token_label("E=16"), Label::Word);
        assert_eq!(token_label("."), Label::Punct);
        assert_eq!(token_label(","), Label::Punct);
        assert_eq!(token_label(":"), Label::Symbol);
        assert_eq!(token_label("%"), Label::Symbol);
        assert!(is_separator_token(","));
        assert!(is_separator_token(":"));
        assert!(is_separator_token(";"));
        assert!(!is_separator_token("."));
    }
}
