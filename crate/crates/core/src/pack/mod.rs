//! Declarative language packs: roots, affixes, verb-chain templates,
//! syllable patterns and the script table.
//!
//! Allomorphy and sandhi are expressed by listing every surface variant:
//! one [`AffixEntry`] per allomorph (tied together by `allomorph_group`) and
//! one surface stem per oblique root form. Matching is always on surfaces.

mod io;
mod validate;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use io::{load_language_pack, write_language_pack, PACK_FILES};
pub use validate::{validate_pack, ValidationReport, Violation, ViolationKind};

use crate::error::{Error, Result};
use crate::normalize::Normalization;
use crate::script::{ScriptTable, SyllableSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Other,
}

impl PartOfSpeech {
    pub fn as_str(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Other => "other",
        }
    }
}

impl FromStr for PartOfSpeech {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "noun" => Ok(PartOfSpeech::Noun),
            "verb" => Ok(PartOfSpeech::Verb),
            "other" => Ok(PartOfSpeech::Other),
            other => Err(format!("unknown part of speech {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEntry {
    /// Canonical dictionary form.
    pub lemma: String,
    /// The lemma plus oblique and alternate stems that may start a word.
    pub surface_stems: Vec<String>,
    pub pos: PartOfSpeech,
    pub frequency_hint: Option<u64>,
}

impl RootEntry {
    pub fn new(lemma: &str, pos: PartOfSpeech, stems: &[&str]) -> Self {
        let mut surface_stems = vec![lemma.to_string()];
        surface_stems.extend(stems.iter().filter(|s| **s != lemma).map(|s| s.to_string()));
        RootEntry {
            lemma: lemma.to_string(),
            surface_stems,
            pos,
            frequency_hint: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffixPosition {
    Suffix,
    Prefix,
}

impl AffixPosition {
    pub fn as_str(self) -> &'static str {
        match self {
            AffixPosition::Suffix => "suffix",
            AffixPosition::Prefix => "prefix",
        }
    }
}

impl FromStr for AffixPosition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "suffix" => Ok(AffixPosition::Suffix),
            "prefix" => Ok(AffixPosition::Prefix),
            other => Err(format!("unknown affix position {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffixCategory {
    Case,
    Tense,
    /// Person-number-gender agreement.
    Png,
    Plural,
    Participle,
    Postposition,
    Clitic,
    Auxiliary,
    Other,
}

impl AffixCategory {
    pub const ALL: [AffixCategory; 9] = [
        AffixCategory::Case,
        AffixCategory::Tense,
        AffixCategory::Png,
        AffixCategory::Plural,
        AffixCategory::Participle,
        AffixCategory::Postposition,
        AffixCategory::Clitic,
        AffixCategory::Auxiliary,
        AffixCategory::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AffixCategory::Case => "case",
            AffixCategory::Tense => "tense",
            AffixCategory::Png => "png",
            AffixCategory::Plural => "plural",
            AffixCategory::Participle => "participle",
            AffixCategory::Postposition => "postposition",
            AffixCategory::Clitic => "clitic",
            AffixCategory::Auxiliary => "auxiliary",
            AffixCategory::Other => "other",
        }
    }
}

impl fmt::Display for AffixCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AffixCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AffixCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .or(match s {
                "person-number-gender" | "person_number_gender" => Some(AffixCategory::Png),
                _ => None,
            })
            .ok_or_else(|| format!("unknown affix category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixEntry {
    /// Exact surface allomorph.
    pub surface: String,
    pub position: AffixPosition,
    pub category: AffixCategory,
    pub allomorph_group: String,
    /// Lower ranks attach closer to the root.
    pub chain_order: i32,
}

impl AffixEntry {
    pub fn suffix(surface: &str, category: AffixCategory, group: &str, chain_order: i32) -> Self {
        AffixEntry {
            surface: surface.to_string(),
            position: AffixPosition::Suffix,
            category,
            allomorph_group: group.to_string(),
            chain_order,
        }
    }

    pub fn prefix(surface: &str, category: AffixCategory, group: &str, chain_order: i32) -> Self {
        AffixEntry {
            position: AffixPosition::Prefix,
            ..AffixEntry::suffix(surface, category, group, chain_order)
        }
    }
}

/// One slot of a verb-chain template: a category, optionally narrowed to a
/// single allomorph group (written `category/GROUP`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryConstraint {
    pub category: AffixCategory,
    pub group: Option<String>,
}

impl CategoryConstraint {
    pub fn matches(&self, affix: &AffixEntry) -> bool {
        affix.category == self.category
            && self
                .group
                .as_ref()
                .is_none_or(|g| *g == affix.allomorph_group)
    }
}

impl fmt::Display for CategoryConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.group {
            Some(g) => write!(f, "{}/{}", self.category, g),
            None => write!(f, "{}", self.category),
        }
    }
}

impl FromStr for CategoryConstraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (cat, group) = match s.split_once('/') {
            Some((c, g)) => (c, Some(g.to_string())),
            None => (s, None),
        };
        Ok(CategoryConstraint {
            category: cat.parse()?,
            group,
        })
    }
}

/// Affix category sequence attached to a root (prefixes then suffixes, in
/// word order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbChainTemplate {
    pub name: String,
    pub sequence: Vec<CategoryConstraint>,
    pub example: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllablePattern {
    pub pattern: Vec<SyllableSymbol>,
    /// Higher priorities are tried first.
    pub priority: i32,
}

impl SyllablePattern {
    pub fn parse(pattern: &str, priority: i32) -> Result<Self, String> {
        let symbols = pattern
            .chars()
            .map(|c| SyllableSymbol::from_char(c).ok_or_else(|| format!("bad pattern symbol {c:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SyllablePattern {
            pattern: symbols,
            priority,
        })
    }

    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|s| s.as_char()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguagePack {
    pub language_id: String,
    pub roots: Vec<RootEntry>,
    pub affixes: Vec<AffixEntry>,
    pub verb_chains: Vec<VerbChainTemplate>,
    pub syllable_patterns: Vec<SyllablePattern>,
    pub script: ScriptTable,
    pub normalization: Normalization,
}

impl LanguagePack {
    pub fn allomorph_surfaces(&self, group: &str) -> Result<BTreeSet<String>> {
        let set: BTreeSet<String> = self
            .affixes
            .iter()
            .filter(|a| a.allomorph_group == group)
            .map(|a| a.surface.clone())
            .collect();
        if set.is_empty() {
            return Err(Error::NoSuchAllomorphGroup(group.to_string()));
        }
        Ok(set)
    }

    pub fn normalize(&self, text: &str) -> String {
        self.normalization.apply(text)
    }

    /// Fails with the first violations if the pack does not validate.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_pack(self);
        if report.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidPack(report.summary(5)))
        }
    }
}

/// Free-function form of [`LanguagePack::allomorph_surfaces`].
pub fn allomorph_surfaces(pack: &LanguagePack, group: &str) -> Result<BTreeSet<String>> {
    pack.allomorph_surfaces(group)
}
