//! Integer-indexed token table and its three-phase construction.
//!
//! File format, one entry per line:
//!
//! ```text
//! # vocab language_id=ta normalization=NFC
//! 0	I	<unk>	special
//! 1	I	<pad>	special
//! 2	I	<bos>	special
//! 3	I	<eos>	special
//! 4	I	வீடு	phase1_root
//! ```
//!
//! `flag` is `I` (word-initial) or `C` (continuation). Surfaces escape tab,
//! newline, carriage return and backslash as `\t`, `\n`, `\r`, `\\`. The
//! optional `#` header records the pack the vocabulary was built for.

mod build;

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rustc_hash::FxHashMap;

pub use build::{
    build_phase1, build_phase2, build_phase3, build_vocabulary, VocabBuildConfig,
};

use crate::error::{Error, Result};
use crate::normalize::Normalization;

pub const UNK_ID: u32 = 0;
pub const PAD_ID: u32 = 1;
pub const BOS_ID: u32 = 2;
pub const EOS_ID: u32 = 3;
pub const SPECIAL_SURFACES: [&str; 4] = ["<unk>", "<pad>", "<bos>", "<eos>"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Special,
    Phase1Root,
    Phase1Affix,
    Phase1Syllable,
    Phase1Char,
    Phase2Generated,
    Phase3Attested,
}

impl Provenance {
    pub const ALL: [Provenance; 7] = [
        Provenance::Special,
        Provenance::Phase1Root,
        Provenance::Phase1Affix,
        Provenance::Phase1Syllable,
        Provenance::Phase1Char,
        Provenance::Phase2Generated,
        Provenance::Phase3Attested,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Special => "special",
            Provenance::Phase1Root => "phase1_root",
            Provenance::Phase1Affix => "phase1_affix",
            Provenance::Phase1Syllable => "phase1_syllable",
            Provenance::Phase1Char => "phase1_char",
            Provenance::Phase2Generated => "phase2_generated",
            Provenance::Phase3Attested => "phase3_attested",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Provenance::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown provenance {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    pub surface: String,
    pub is_word_initial: bool,
    pub provenance: Provenance,
}

impl VocabEntry {
    pub fn new(surface: impl Into<String>, is_word_initial: bool, provenance: Provenance) -> Self {
        VocabEntry {
            surface: surface.into(),
            is_word_initial,
            provenance,
        }
    }
}

/// Language the vocabulary was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabMeta {
    pub language_id: String,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    index: FxHashMap<String, [Option<u32>; 2]>,
    meta: Option<VocabMeta>,
}

fn slot(is_word_initial: bool) -> usize {
    usize::from(!is_word_initial)
}

impl Vocabulary {
    /// Builds a vocabulary from the non-special entries; ids 0..3 are the
    /// reserved specials.
    pub fn from_entries(
        entries: impl IntoIterator<Item = VocabEntry>,
        meta: Option<VocabMeta>,
    ) -> Result<Self> {
        let mut all: Vec<VocabEntry> = SPECIAL_SURFACES
            .iter()
            .map(|s| VocabEntry::new(*s, true, Provenance::Special))
            .collect();
        all.extend(entries);
        Self::from_full(all, meta)
    }

    fn from_full(entries: Vec<VocabEntry>, meta: Option<VocabMeta>) -> Result<Self> {
        let mut index: FxHashMap<String, [Option<u32>; 2]> = FxHashMap::default();
        let mut dups = Vec::new();
        for (id, e) in entries.iter().enumerate().skip(SPECIAL_SURFACES.len()) {
            let ids = index.entry(e.surface.clone()).or_default();
            let s = &mut ids[slot(e.is_word_initial)];
            match s {
                Some(first) => dups.push(format!(
                    "{:?} ({}) at ids {first} and {id}",
                    e.surface,
                    flag_char(e.is_word_initial)
                )),
                None => *s = Some(id as u32),
            }
        }
        if !dups.is_empty() {
            return Err(Error::Duplicates(dups));
        }
        Ok(Vocabulary {
            entries,
            index,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn get(&self, id: u32) -> Option<&VocabEntry> {
        self.entries.get(id as usize)
    }

    pub fn meta(&self) -> Option<&VocabMeta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: Option<VocabMeta>) {
        self.meta = meta;
    }

    pub fn id(&self, surface: &str, is_word_initial: bool) -> Option<u32> {
        self.index.get(surface).and_then(|ids| ids[slot(is_word_initial)])
    }

    pub fn contains(&self, surface: &str, is_word_initial: bool) -> bool {
        self.id(surface, is_word_initial).is_some()
    }

    /// Tier-0 membership: the word is a word-initial entry.
    pub fn is_whole_word(&self, word: &str) -> bool {
        self.contains(word, true)
    }

    /// Entry counts per provenance, in [`Provenance::ALL`] order.
    pub fn provenance_histogram(&self) -> Vec<(Provenance, usize)> {
        Provenance::ALL
            .into_iter()
            .map(|p| (p, self.entries.iter().filter(|e| e.provenance == p).count()))
            .collect()
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        if let Some(meta) = &self.meta {
            writeln!(
                out,
                "# vocab language_id={} normalization={}",
                meta.language_id, meta.normalization
            )
            .unwrap();
        }
        for (id, e) in self.entries.iter().enumerate() {
            writeln!(
                out,
                "{id}\t{}\t{}\t{}",
                flag_char(e.is_word_initial),
                escape_surface(&e.surface),
                e.provenance
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        const FILE: &str = "vocabulary";
        let mut entries = Vec::new();
        let mut meta = None;
        let mut lines_of: FxHashMap<(String, bool), usize> = FxHashMap::default();
        let mut dups = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if let Some(header) = line.strip_prefix('#') {
                meta = parse_header(header).or(meta);
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::malformed(
                    FILE,
                    n,
                    format!("expected 4 tab-separated columns, found {}", fields.len()),
                ));
            }
            let id: usize = fields[0]
                .parse()
                .map_err(|_| Error::malformed(FILE, n, format!("bad id {:?}", fields[0])))?;
            if id != entries.len() {
                return Err(Error::malformed(
                    FILE,
                    n,
                    format!("expected id {}, found {id}", entries.len()),
                ));
            }
            let is_word_initial = match fields[1] {
                "I" => true,
                "C" => false,
                other => {
                    return Err(Error::malformed(FILE, n, format!("bad flag {other:?}")))
                }
            };
            let surface = unescape_surface(fields[2])
                .ok_or_else(|| Error::malformed(FILE, n, "bad escape in surface"))?;
            let provenance = fields[3]
                .parse()
                .map_err(|e: String| Error::malformed(FILE, n, e))?;
            if id < SPECIAL_SURFACES.len() {
                if surface != SPECIAL_SURFACES[id] {
                    return Err(Error::malformed(
                        FILE,
                        n,
                        format!("id {id} must be {}", SPECIAL_SURFACES[id]),
                    ));
                }
            } else if let Some(first) = lines_of.insert((surface.clone(), is_word_initial), n) {
                dups.push(format!("{surface:?} at lines {first} and {n}"));
            }
            entries.push(VocabEntry {
                surface,
                is_word_initial,
                provenance,
            });
        }
        if !dups.is_empty() {
            return Err(Error::Duplicates(dups));
        }
        if entries.len() < SPECIAL_SURFACES.len() {
            return Err(Error::malformed(FILE, 0, "missing reserved special entries"));
        }
        Self::from_full(entries, meta)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

pub fn save_vocabulary(vocab: &Vocabulary, path: impl AsRef<Path>) -> Result<()> {
    vocab.save(path)
}

pub fn load_vocabulary(path: impl AsRef<Path>) -> Result<Vocabulary> {
    Vocabulary::load(path)
}

fn parse_header(header: &str) -> Option<VocabMeta> {
    let mut words = header.split_whitespace();
    if words.next() != Some("vocab") {
        return None;
    }
    let mut language_id = None;
    let mut normalization = Normalization::Nfc;
    for kv in words {
        match kv.split_once('=') {
            Some(("language_id", v)) => language_id = Some(v.to_string()),
            Some(("normalization", v)) => normalization = v.parse().ok()?,
            _ => {}
        }
    }
    Some(VocabMeta {
        language_id: language_id?,
        normalization,
    })
}

fn flag_char(is_word_initial: bool) -> char {
    if is_word_initial {
        'I'
    } else {
        'C'
    }
}

pub(crate) fn escape_surface(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn unescape_surface(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next()? {
            '\\' => out.push('\\'),
            't' => out.push('\t'),
            'n' => out.push('\n'),
            'r' => out.push('\r'),
            _ => return None,
        }
    }
    Some(out)
}
