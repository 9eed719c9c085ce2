//! Script character tables and pack-aware grapheme clustering.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_segmentation::UnicodeSegmentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharClass {
    Consonant,
    Vowel,
    VowelSign,
    /// Virama and other modifier signs.
    Modifier,
    Digit,
    Other,
}

impl CharClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CharClass::Consonant => "consonant",
            CharClass::Vowel => "vowel",
            CharClass::VowelSign => "vowel_sign",
            CharClass::Modifier => "virama",
            CharClass::Digit => "digit",
            CharClass::Other => "other",
        }
    }

    /// Symbol used by syllable patterns, if the class takes part in syllables.
    pub fn symbol(self) -> Option<SyllableSymbol> {
        match self {
            CharClass::Consonant => Some(SyllableSymbol::C),
            CharClass::Vowel => Some(SyllableSymbol::V),
            CharClass::VowelSign | CharClass::Modifier => Some(SyllableSymbol::M),
            CharClass::Digit | CharClass::Other => None,
        }
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CharClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "consonant" => CharClass::Consonant,
            "vowel" => CharClass::Vowel,
            "vowel_sign" => CharClass::VowelSign,
            "virama" | "modifier" => CharClass::Modifier,
            "digit" => CharClass::Digit,
            "other" => CharClass::Other,
            other => return Err(format!("unknown character class {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyllableSymbol {
    C,
    V,
    M,
}

impl SyllableSymbol {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'C' => Some(SyllableSymbol::C),
            'V' => Some(SyllableSymbol::V),
            'M' => Some(SyllableSymbol::M),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            SyllableSymbol::C => 'C',
            SyllableSymbol::V => 'V',
            SyllableSymbol::M => 'M',
        }
    }
}

/// A classified (or unclassified) span of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub span: Range<usize>,
    pub class: Option<CharClass>,
}

/// Character classes for one script plus the joining rules used for
/// grapheme clustering.
///
/// Keys are single characters or multi-character sequences; a listed
/// sequence is always matched as one unit (longest key wins). A cluster is a
/// base unit followed by every unit whose class is in `joining_classes`, and
/// by unclassified combining marks and joiners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptTable {
    entries: Vec<(String, CharClass)>,
    lookup: FxHashMap<String, CharClass>,
    max_key_chars: usize,
    joining_classes: Vec<CharClass>,
}

impl Default for ScriptTable {
    fn default() -> Self {
        ScriptTable::new(Vec::new())
    }
}

impl ScriptTable {
    pub fn new(entries: Vec<(String, CharClass)>) -> Self {
        let mut lookup = FxHashMap::default();
        let mut max_key_chars = 0;
        for (key, class) in &entries {
            lookup.entry(key.clone()).or_insert(*class);
            max_key_chars = max_key_chars.max(key.chars().count());
        }
        ScriptTable {
            entries,
            lookup,
            max_key_chars,
            joining_classes: vec![CharClass::VowelSign, CharClass::Modifier],
        }
    }

    /// Entries in source order.
    pub fn entries(&self) -> &[(String, CharClass)] {
        &self.entries
    }

    pub fn class_of(&self, key: &str) -> Option<CharClass> {
        self.lookup.get(key).copied()
    }

    pub fn members(&self, class: CharClass) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(move |(_, c)| *c == class)
            .map(|(k, _)| k.as_str())
    }

    pub fn joining_classes(&self) -> &[CharClass] {
        &self.joining_classes
    }

    /// Longest classified key at the start of `text`: (byte length, class).
    pub fn classify_prefix(&self, text: &str) -> Option<(usize, CharClass)> {
        if self.max_key_chars == 0 {
            return None;
        }
        let mut best = None;
        for (n, (idx, c)) in text.char_indices().enumerate() {
            if n >= self.max_key_chars {
                break;
            }
            let end = idx + c.len_utf8();
            if let Some(class) = self.lookup.get(&text[..end]) {
                best = Some((end, *class));
            }
        }
        best
    }

    /// Splits `word` into classified units; unclassified characters become
    /// singleton units with no class.
    pub fn units(&self, word: &str) -> Vec<Unit> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < word.len() {
            let rest = &word[pos..];
            match self.classify_prefix(rest) {
                Some((len, class)) => {
                    out.push(Unit {
                        span: pos..pos + len,
                        class: Some(class),
                    });
                    pos += len;
                }
                None => {
                    let len = rest.chars().next().map_or(1, char::len_utf8);
                    out.push(Unit {
                        span: pos..pos + len,
                        class: None,
                    });
                    pos += len;
                }
            }
        }
        out
    }

    /// True if every character of `text` is covered by a classified unit.
    pub fn covers(&self, text: &str) -> bool {
        self.units(text).iter().all(|u| u.class.is_some())
    }

    /// Byte ranges of the grapheme clusters of `word`.
    pub fn clusters(&self, word: &str) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < word.len() {
            let start = pos;
            let rest = &word[pos..];
            pos += match self.classify_prefix(rest) {
                Some((len, _)) => len,
                None => rest.graphemes(true).next().map_or(rest.len(), str::len),
            };
            while pos < word.len() {
                let rest = &word[pos..];
                match self.classify_prefix(rest) {
                    Some((len, class)) if self.joining_classes.contains(&class) => pos += len,
                    Some(_) => break,
                    None => {
                        let c = rest.chars().next().expect("non-empty rest");
                        if is_unclassified_joiner(c) {
                            pos += c.len_utf8();
                        } else {
                            break;
                        }
                    }
                }
            }
            out.push(start..pos);
        }
        out
    }

    pub fn cluster_strs<'a>(&self, word: &'a str) -> Vec<&'a str> {
        self.clusters(word).into_iter().map(|r| &word[r]).collect()
    }
}

fn is_unclassified_joiner(c: char) -> bool {
    matches!(c, '\u{200C}' | '\u{200D}')
        || matches!(
            get_general_category(c),
            GeneralCategory::NonspacingMark
                | GeneralCategory::SpacingMark
                | GeneralCategory::EnclosingMark
        )
}
