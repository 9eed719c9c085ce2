use std::fmt;
use std::str::FromStr;

use super::analyzer::{Decomposition, MorphAnalyzer};
use super::pretok::{pretokenize, PieceKind};
use super::syllable::{grapheme_split, matching_order, syllabify_with};
use super::{Segmentation, Token, TokenCategory};
use crate::error::{Error, Result};
use crate::pack::{LanguagePack, SyllablePattern};
use crate::vocab::{Vocabulary, BOS_ID, EOS_ID, PAD_ID, UNK_ID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownPolicy {
    /// Re-split out-of-vocabulary tokens into graphemes and look those up.
    #[default]
    GraphemeTokens,
    /// Map an out-of-vocabulary token straight to `<unk>`.
    SingleUnknown,
}

impl FromStr for UnknownPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grapheme_tokens" => Ok(UnknownPolicy::GraphemeTokens),
            "single_unknown" => Ok(UnknownPolicy::SingleUnknown),
            other => Err(format!("unknown policy {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub max_affix_chain: usize,
    pub unknown_policy: UnknownPolicy,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            max_affix_chain: 6,
            unknown_policy: UnknownPolicy::GraphemeTokens,
        }
    }
}

/// One element of a tokenized text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Word(Segmentation),
    /// A punctuation or digit run.
    Symbol(Token),
    /// A whitespace run, kept verbatim.
    Space(String),
}

impl Piece {
    pub fn tokens(&self) -> Vec<Token> {
        match self {
            Piece::Word(seg) => seg.tokens.clone(),
            Piece::Symbol(t) => vec![t.clone()],
            Piece::Space(s) => vec![Token::new(s, 0, TokenCategory::Whitespace, true)],
        }
    }

    pub fn text(&self) -> &str {
        match self {
            Piece::Word(seg) => &seg.word,
            Piece::Symbol(t) => &t.surface,
            Piece::Space(s) => s,
        }
    }
}

pub fn detokenize(pieces: &[Piece]) -> String {
    let mut out = String::new();
    for piece in pieces {
        match piece {
            Piece::Word(seg) => {
                for t in &seg.tokens {
                    out.push_str(&t.surface);
                }
            }
            Piece::Symbol(t) => out.push_str(&t.surface),
            Piece::Space(s) => out.push_str(s),
        }
    }
    out
}

/// Immutable tokenizer: pack, vocabulary and configuration.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    pack: LanguagePack,
    vocab: Vocabulary,
    config: TokenizerConfig,
    analyzer: MorphAnalyzer,
    syllables: Vec<SyllablePattern>,
}

impl fmt::Display for Tokenizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "morpho[{}; {} tokens]", self.pack.language_id, self.vocab.len())
    }
}

impl Tokenizer {
    pub fn new(pack: LanguagePack, vocab: Vocabulary, config: TokenizerConfig) -> Result<Self> {
        if config.max_affix_chain == 0 {
            return Err(Error::InvalidPack("max_affix_chain must be at least 1".into()));
        }
        pack.ensure_valid()?;
        if let Some(meta) = vocab.meta() {
            if meta.language_id != pack.language_id {
                return Err(Error::Mismatch(format!(
                    "vocabulary language {:?}, pack language {:?}",
                    meta.language_id, pack.language_id
                )));
            }
            if meta.normalization != pack.normalization {
                return Err(Error::Mismatch(format!(
                    "vocabulary normalization {}, pack normalization {}",
                    meta.normalization, pack.normalization
                )));
            }
        }
        let analyzer = MorphAnalyzer::new(&pack);
        let syllables = matching_order(&pack.syllable_patterns);
        Ok(Tokenizer {
            pack,
            vocab,
            config,
            analyzer,
            syllables,
        })
    }

    pub fn pack(&self) -> &LanguagePack {
        &self.pack
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn config(&self) -> &TokenizerConfig {
        &self.config
    }

    pub fn analyzer(&self) -> &MorphAnalyzer {
        &self.analyzer
    }

    pub fn normalize(&self, text: &str) -> String {
        self.pack.normalize(text)
    }

    /// Runs the tier cascade on one normalized, whitespace-free word.
    pub fn tokenize_word(&self, word: &str) -> Result<Segmentation> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if self.vocab.is_whole_word(word) {
            return Ok(Segmentation {
                word: word.to_string(),
                tokens: vec![Token::new(word, 0, TokenCategory::WholeWord, true)],
                tier_used: 0,
                root_lemma: None,
            });
        }
        if let Some(d) = self.decompose(word) {
            return Ok(self.segmentation_from(word, &d));
        }
        if let Ok(spans) = syllabify_with(&self.pack.script, &self.syllables, word) {
            return Ok(Segmentation::from_spans(
                word,
                spans.into_iter().map(|r| (r, TokenCategory::Syllable)),
                2,
            ));
        }
        Ok(Segmentation {
            word: word.to_string(),
            tokens: grapheme_split(word, &self.pack.script),
            tier_used: 3,
            root_lemma: None,
        })
    }

    /// Best root + affix cover, as raw spans.
    pub fn decompose(&self, word: &str) -> Option<Decomposition> {
        self.analyzer.decompose(word, self.config.max_affix_chain)
    }

    /// Tier-1 tokens for `word`, if any complete cover exists.
    pub fn decompose_morphological(&self, word: &str) -> Option<Vec<Token>> {
        self.decompose(word)
            .map(|d| self.segmentation_from(word, &d).tokens)
    }

    /// Best cover matching a verb-chain template.
    pub fn match_verb_chain(&self, word: &str) -> Option<Vec<Token>> {
        self.analyzer
            .match_verb_chain(word, self.config.max_affix_chain)
            .map(|d| self.segmentation_from(word, &d).tokens)
    }

    pub fn syllabify(&self, word: &str) -> Result<Vec<Token>> {
        let spans = syllabify_with(&self.pack.script, &self.syllables, word)?;
        Ok(Segmentation::from_spans(
            word,
            spans.into_iter().map(|r| (r, TokenCategory::Syllable)),
            2,
        )
        .tokens)
    }

    pub fn grapheme_split(&self, word: &str) -> Vec<Token> {
        grapheme_split(word, &self.pack.script)
    }

    fn segmentation_from(&self, word: &str, d: &Decomposition) -> Segmentation {
        let affix_cat = if d.verb_chain.is_some() {
            TokenCategory::VerbChainElement
        } else {
            TokenCategory::Affix
        };
        let spans = d
            .prefixes
            .iter()
            .map(|a| (a.span.clone(), affix_cat))
            .chain(std::iter::once((d.root_span.clone(), TokenCategory::Root)))
            .chain(d.suffixes.iter().map(|a| (a.span.clone(), affix_cat)));
        let mut seg = Segmentation::from_spans(word, spans, 1);
        seg.root_lemma = Some(self.pack.roots[d.root].lemma.clone());
        seg
    }

    /// Normalizes and tokenizes running text. Whitespace runs are kept as
    /// [`Piece::Space`]; punctuation and digit runs become single tokens.
    pub fn tokenize_text(&self, text: &str) -> Vec<Piece> {
        let text = self.normalize(text);
        self.tokenize_normalized(&text)
    }

    pub fn tokenize_normalized(&self, text: &str) -> Vec<Piece> {
        pretokenize(text)
            .into_iter()
            .map(|p| {
                let s = &text[p.span];
                match p.kind {
                    PieceKind::Whitespace => Piece::Space(s.to_string()),
                    PieceKind::Punctuation => {
                        Piece::Symbol(Token::new(s, 0, TokenCategory::Punctuation, true))
                    }
                    PieceKind::Number => {
                        Piece::Symbol(Token::new(s, 0, TokenCategory::Number, true))
                    }
                    PieceKind::Word => Piece::Word(
                        self.tokenize_word(s)
                            .expect("pre-tokenized words are non-empty"),
                    ),
                }
            })
            .collect()
    }

    pub fn encode(&self, text: &str) -> Vec<u32> {
        self.encode_counting(text).0
    }

    /// Encodes `text`, also returning how many `<unk>` ids were emitted.
    pub fn encode_counting(&self, text: &str) -> (Vec<u32>, usize) {
        let mut ids = Vec::new();
        let mut unknown = 0;
        for piece in self.tokenize_text(text) {
            for token in piece.tokens() {
                self.encode_token(&token, &mut ids, &mut unknown);
            }
        }
        (ids, unknown)
    }

    fn encode_token(&self, token: &Token, ids: &mut Vec<u32>, unknown: &mut usize) {
        if let Some(id) = self.vocab.id(&token.surface, token.is_word_initial) {
            ids.push(id);
            return;
        }
        match self.config.unknown_policy {
            UnknownPolicy::SingleUnknown => {
                ids.push(UNK_ID);
                *unknown += 1;
            }
            UnknownPolicy::GraphemeTokens => {
                for (i, g) in self
                    .pack
                    .script
                    .cluster_strs(&token.surface)
                    .into_iter()
                    .enumerate()
                {
                    let initial = token.is_word_initial && i == 0;
                    match self.vocab.id(g, initial) {
                        Some(id) => ids.push(id),
                        None => {
                            ids.push(UNK_ID);
                            *unknown += 1;
                        }
                    }
                }
            }
        }
    }

    /// `<unk>` decodes to U+FFFD; the other specials decode to nothing.
    pub fn decode(&self, ids: &[u32]) -> Result<String> {
        let mut out = String::new();
        for &id in ids {
            let entry = self.vocab.get(id).ok_or(Error::InvalidTokenId(id))?;
            match id {
                UNK_ID => out.push('\u{FFFD}'),
                PAD_ID | BOS_ID | EOS_ID => {}
                _ => out.push_str(&entry.surface),
            }
        }
        Ok(out)
    }
}
