//! Language-parametric morphological tokenizer.
//!
//! A [`LanguagePack`] describes one language: roots with their surface
//! stems, affixes with ordering and allomorph groups, verb-chain templates,
//! syllable patterns and a script table. A [`Tokenizer`] combines a pack
//! with a [`Vocabulary`] and splits each word through four tiers:
//! whole-word lookup, root + affix decomposition, syllables, graphemes.
//!
//! ```no_run
//! use morphotok::{load_language_pack, Tokenizer, TokenizerConfig, Vocabulary};
//!
//! let pack = load_language_pack("fixtures/tr")?;
//! let vocab = Vocabulary::load("vocab.tsv")?;
//! let tok = Tokenizer::new(pack, vocab, TokenizerConfig::default())?;
//! let seg = tok.tokenize_word("evlerinden")?;
//! assert_eq!(seg.surfaces(), ["ev", "ler", "in", "den"]);
//! # Ok::<(), morphotok::Error>(())
//! ```

pub mod bpe;
mod error;
pub mod eval;
pub mod morph;
mod normalize;
pub mod pack;
pub mod script;
pub mod vocab;

pub use bpe::{bpe_tokenize, train_bpe, BpeModel};
pub use error::{Error, Result};
pub use morph::{
    detokenize, Piece, Segmentation, Token, TokenCategory, Tokenizer, TokenizerConfig,
    UnknownPolicy,
};
pub use normalize::Normalization;
pub use pack::{load_language_pack, validate_pack, LanguagePack};
pub use vocab::{build_vocabulary, load_vocabulary, save_vocabulary, VocabBuildConfig, Vocabulary};
