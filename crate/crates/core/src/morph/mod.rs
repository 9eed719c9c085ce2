//! The four-tier tokenization engine.
//!
//! | tier | strategy                   | token type          |
//! |------|----------------------------|---------------------|
//! | 0    | whole-word vocabulary hit  | single token        |
//! | 1    | root + affix decomposition | root, affixes       |
//! | 2    | syllable segmentation      | syllables           |
//! | 3    | grapheme fallback          | grapheme clusters   |
//!
//! Every tier is surface-aligned: token surfaces concatenate to the word.

mod analyzer;
pub(crate) mod pretok;
mod syllable;
mod tokenizer;
mod trie;

use std::fmt;
use std::str::FromStr;

pub use analyzer::{AffixSpan, Decomposition, MorphAnalyzer};
pub(crate) use analyzer::SearchMode;
pub use pretok::{pretokenize, PieceKind, RawPiece};
pub use syllable::{grapheme_split, syllabify_with};
pub use tokenizer::{detokenize, Piece, Tokenizer, TokenizerConfig, UnknownPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenCategory {
    WholeWord,
    Root,
    Affix,
    VerbChainElement,
    Syllable,
    Grapheme,
    Punctuation,
    Number,
    Whitespace,
    Unknown,
}

impl TokenCategory {
    pub const ALL: [TokenCategory; 10] = [
        TokenCategory::WholeWord,
        TokenCategory::Root,
        TokenCategory::Affix,
        TokenCategory::VerbChainElement,
        TokenCategory::Syllable,
        TokenCategory::Grapheme,
        TokenCategory::Punctuation,
        TokenCategory::Number,
        TokenCategory::Whitespace,
        TokenCategory::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TokenCategory::WholeWord => "whole_word",
            TokenCategory::Root => "root",
            TokenCategory::Affix => "affix",
            TokenCategory::VerbChainElement => "verb_chain_element",
            TokenCategory::Syllable => "syllable",
            TokenCategory::Grapheme => "grapheme",
            TokenCategory::Punctuation => "punctuation",
            TokenCategory::Number => "number",
            TokenCategory::Whitespace => "whitespace",
            TokenCategory::Unknown => "unknown",
        }
    }
}

impl fmt::Display for TokenCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TokenCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TokenCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown token category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub tier: u8,
    pub category: TokenCategory,
    pub is_word_initial: bool,
}

impl Token {
    pub fn new(surface: &str, tier: u8, category: TokenCategory, is_word_initial: bool) -> Self {
        Token {
            surface: surface.to_string(),
            tier,
            category,
            is_word_initial,
        }
    }
}

/// Tokenizer output for one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub word: String,
    pub tokens: Vec<Token>,
    /// Highest tier among the word's tokens.
    pub tier_used: u8,
    /// Lemma of the matched root for tier-1 segmentations.
    pub root_lemma: Option<String>,
}

impl Segmentation {
    pub(crate) fn from_spans(
        word: &str,
        spans: impl IntoIterator<Item = (std::ops::Range<usize>, TokenCategory)>,
        tier: u8,
    ) -> Self {
        let tokens = spans
            .into_iter()
            .enumerate()
            .map(|(i, (r, cat))| Token::new(&word[r], tier, cat, i == 0))
            .collect();
        Segmentation {
            word: word.to_string(),
            tokens,
            tier_used: tier,
            root_lemma: None,
        }
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Concatenated surfaces equal the word.
    pub fn is_aligned(&self) -> bool {
        let mut rest = self.word.as_str();
        for t in &self.tokens {
            match rest.strip_prefix(t.surface.as_str()) {
                Some(r) if !t.surface.is_empty() => rest = r,
                _ => return false,
            }
        }
        rest.is_empty()
    }
}
