//! Three-phase vocabulary construction: the pack's linguistic inventory,
//! corpus-validated root + affix forms, then attested high-frequency words.

use rustc_hash::FxHashSet;

use super::{Provenance, VocabEntry, VocabMeta, Vocabulary, SPECIAL_SURFACES};
use crate::error::{Error, Result};
use crate::eval::CorpusCounts;
use crate::morph::{MorphAnalyzer, SearchMode};
use crate::pack::{AffixPosition, LanguagePack};
use crate::script::{CharClass, SyllableSymbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabBuildConfig {
    /// Total vocabulary size, specials included.
    pub target_size: usize,
    pub min_freq_phase2: u64,
    pub min_freq_phase3: u64,
    /// Affixes per generated phase-2 form.
    pub max_generated_affixes: usize,
    /// Worker threads for phase-2 candidate filtering.
    pub threads: usize,
}

impl VocabBuildConfig {
    pub fn new(target_size: usize) -> Self {
        VocabBuildConfig {
            target_size,
            min_freq_phase2: 3,
            min_freq_phase3: 3,
            max_generated_affixes: 3,
            threads: 1,
        }
    }
}

/// Longest syllable pattern expanded into phase-1 syllables (CVC).
const MAX_GENERATED_SYLLABLE: usize = 3;

const EXTRA_SPECIALS: &[&str] = &[" ", "\t", "\n", "\r"];

struct EntrySet {
    seen: FxHashSet<(String, bool)>,
    entries: Vec<VocabEntry>,
}

impl EntrySet {
    fn new() -> Self {
        EntrySet {
            seen: FxHashSet::default(),
            entries: Vec::new(),
        }
    }

    fn push(&mut self, surface: &str, is_word_initial: bool, provenance: Provenance) {
        if surface.is_empty() || SPECIAL_SURFACES.contains(&surface) {
            return;
        }
        if self.seen.insert((surface.to_string(), is_word_initial)) {
            self.entries
                .push(VocabEntry::new(surface, is_word_initial, provenance));
        }
    }

    fn both(&mut self, surface: &str, provenance: Provenance) {
        self.push(surface, true, provenance);
        self.push(surface, false, provenance);
    }
}

fn symbol_members(pack: &LanguagePack, symbol: SyllableSymbol) -> Vec<&str> {
    let classes: &[CharClass] = match symbol {
        SyllableSymbol::C => &[CharClass::Consonant],
        SyllableSymbol::V => &[CharClass::Vowel],
        SyllableSymbol::M => &[CharClass::VowelSign, CharClass::Modifier],
    };
    pack.script
        .entries()
        .iter()
        .filter(|(_, c)| classes.contains(c))
        .map(|(k, _)| k.as_str())
        .collect()
}

/// Phase 1: root stems, affixes, generated syllables, script characters, and
/// digit/punctuation/whitespace specials. Order is fixed by the pack files.
pub fn build_phase1(pack: &LanguagePack) -> Vec<VocabEntry> {
    let mut set = EntrySet::new();
    for root in &pack.roots {
        for stem in &root.surface_stems {
            set.push(stem, true, Provenance::Phase1Root);
        }
    }
    for affix in &pack.affixes {
        let initial = affix.position == AffixPosition::Prefix;
        set.push(&affix.surface, initial, Provenance::Phase1Affix);
    }
    for pattern in &pack.syllable_patterns {
        if pattern.pattern.len() > MAX_GENERATED_SYLLABLE {
            continue;
        }
        let slots: Vec<Vec<&str>> = pattern
            .pattern
            .iter()
            .map(|s| symbol_members(pack, *s))
            .collect();
        for syllable in cartesian(&slots) {
            set.both(&syllable, Provenance::Phase1Syllable);
        }
    }
    for (key, _) in pack.script.entries() {
        set.both(key, Provenance::Phase1Char);
    }
    for c in ('0'..='9').chain((0x21u8..0x7f).map(char::from).filter(char::is_ascii_punctuation)) {
        set.both(&c.to_string(), Provenance::Special);
    }
    for s in EXTRA_SPECIALS {
        set.both(s, Provenance::Special);
    }
    set.entries
}

fn cartesian(slots: &[Vec<&str>]) -> Vec<String> {
    let mut out = vec![String::new()];
    for members in slots {
        let mut next = Vec::with_capacity(out.len() * members.len());
        for prefix in &out {
            for m in members {
                next.push(format!("{prefix}{m}"));
            }
        }
        out = next;
    }
    out.retain(|s| !s.is_empty());
    out
}

fn present(existing: &[VocabEntry]) -> FxHashSet<(&str, bool)> {
    existing
        .iter()
        .map(|e| (e.surface.as_str(), e.is_word_initial))
        .collect()
}

/// Phase 2: corpus word types (frequency ≥ `min_freq_phase2`) that are a
/// root stem plus 1..=`max_generated_affixes` affixes under the pack's
/// ordering rules. Candidates come from the corpus, so the root × affix
/// product is never materialized.
pub fn build_phase2(
    pack: &LanguagePack,
    counts: &CorpusCounts,
    cfg: &VocabBuildConfig,
    existing: &[VocabEntry],
) -> Vec<VocabEntry> {
    let analyzer = MorphAnalyzer::new(pack);
    let have = present(existing);
    let candidates: Vec<(&str, u64)> = counts
        .ranked()
        .into_iter()
        .filter(|(w, n)| *n >= cfg.min_freq_phase2 && !have.contains(&(*w, true)))
        .collect();

    let generable = |w: &str| {
        analyzer
            .search(w, cfg.max_generated_affixes, SearchMode::WithAffix)
            .is_some()
    };

    let keep: Vec<bool> = if cfg.threads <= 1 || candidates.len() < 1024 {
        candidates.iter().map(|(w, _)| generable(w)).collect()
    } else {
        let chunk = candidates.len().div_ceil(cfg.threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = candidates
                .chunks(chunk)
                .map(|part| {
                    let generable = &generable;
                    scope.spawn(move || part.iter().map(|(w, _)| generable(w)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("phase-2 worker panicked"))
                .collect()
        })
    };

    candidates
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((w, _), _)| VocabEntry::new(*w, true, Provenance::Phase2Generated))
        .collect()
}

/// Phase 3: attested words (frequency ≥ `min_freq_phase3`) not yet in the
/// vocabulary, most frequent first, until `target_size` is reached.
/// `existing` holds every non-special entry built so far.
pub fn build_phase3(
    counts: &CorpusCounts,
    existing: &[VocabEntry],
    cfg: &VocabBuildConfig,
) -> Result<Vec<VocabEntry>> {
    let used = SPECIAL_SURFACES.len() + existing.len();
    if cfg.target_size < used {
        return Err(Error::TargetTooSmall { minimum: used });
    }
    let room = cfg.target_size - used;
    let have = present(existing);
    Ok(counts
        .ranked()
        .into_iter()
        .filter(|(w, n)| *n >= cfg.min_freq_phase3 && !have.contains(&(*w, true)))
        .take(room)
        .map(|(w, _)| VocabEntry::new(w, true, Provenance::Phase3Attested))
        .collect())
}

/// Specials, then phases 1, 2 and 3 in order. A pure function of its inputs.
pub fn build_vocabulary(
    pack: &LanguagePack,
    counts: &CorpusCounts,
    cfg: &VocabBuildConfig,
) -> Result<Vocabulary> {
    let mut entries = build_phase1(pack);
    let phase2 = build_phase2(pack, counts, cfg, &entries);
    entries.extend(phase2);
    let phase3 = build_phase3(counts, &entries, cfg)?;
    entries.extend(phase3);
    Vocabulary::from_entries(
        entries,
        Some(VocabMeta {
            language_id: pack.language_id.clone(),
            normalization: pack.normalization,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pack::{AffixCategory, AffixEntry, PartOfSpeech, RootEntry, SyllablePattern};
    use crate::script::ScriptTable;

    fn pack(roots: &[&str], suffixes: &[(&str, i32)], letters: &str) -> LanguagePack {
        LanguagePack {
            language_id: "x".into(),
            roots: roots
                .iter()
                .map(|r| RootEntry::new(r, PartOfSpeech::Noun, &[]))
                .collect(),
            affixes: suffixes
                .iter()
                .map(|(s, o)| AffixEntry::suffix(s, AffixCategory::Case, &s.to_uppercase(), *o))
                .collect(),
            verb_chains: vec![],
            syllable_patterns: vec![],
            script: ScriptTable::new(
                letters
                    .chars()
                    .map(|c| {
                        let class = if "aeiou".contains(c) {
                            CharClass::Vowel
                        } else {
                            CharClass::Consonant
                        };
                        (c.to_string(), class)
                    })
                    .collect(),
            ),
            normalization: Default::default(),
        }
    }

    fn has(entries: &[VocabEntry], s: &str, initial: bool) -> Option<Provenance> {
        entries
            .iter()
            .find(|e| e.surface == s && e.is_word_initial == initial)
            .map(|e| e.provenance)
    }

    #[test]
    fn phase1_minimal_finnish() {
        let p = pack(&["talo"], &[("i", 1), ("ssa", 2), ("an", 3)], "talosin n");
        let e = build_phase1(&p);
        assert_eq!(has(&e, "talo", true), Some(Provenance::Phase1Root));
        assert_eq!(has(&e, "talo", false), None);
        for s in ["i", "ssa", "an"] {
            assert_eq!(has(&e, s, false), Some(Provenance::Phase1Affix));
        }
        // letters carry both flags; the "i" continuation slot is already the affix
        assert_eq!(has(&e, "t", true), Some(Provenance::Phase1Char));
        assert_eq!(has(&e, "t", false), Some(Provenance::Phase1Char));
        assert_eq!(has(&e, "i", true), Some(Provenance::Phase1Char));
    }

    #[test]
    fn phase1_syllables_are_generated() {
        let mut p = pack(&[], &[], "kta");
        p.syllable_patterns = vec![
            SyllablePattern::parse("CV", 2).unwrap(),
            SyllablePattern::parse("CVC", 1).unwrap(),
            SyllablePattern::parse("CVCV", 0).unwrap(),
        ];
        let e = build_phase1(&p);
        let syl: Vec<&str> = e
            .iter()
            .filter(|e| e.provenance == Provenance::Phase1Syllable && e.is_word_initial)
            .map(|e| e.surface.as_str())
            .collect();
        assert_eq!(syl, vec!["ka", "ta", "kak", "kat", "tak", "tat"]);
    }

    #[test]
    fn phase2_frequency_threshold() {
        let p = pack(&["ev"], &[("ler", 1), ("den", 2)], "evlrdn");
        let counts = CorpusCounts::from_pairs([("evler", 5), ("evden", 2), ("evlerden", 4)]);
        let cfg = VocabBuildConfig::new(1000);
        let p1 = build_phase1(&p);
        let p2 = build_phase2(&p, &counts, &cfg, &p1);
        let surf: Vec<&str> = p2.iter().map(|e| e.surface.as_str()).collect();
        assert_eq!(surf, vec!["evler", "evlerden"]);
    }

    #[test]
    fn phase2_empty_without_matches() {
        let p = pack(&["ev"], &[("ler", 1)], "evlr");
        let counts = CorpusCounts::from_pairs([("kitap", 10)]);
        let p2 = build_phase2(&p, &counts, &VocabBuildConfig::new(100), &build_phase1(&p));
        assert!(p2.is_empty());
    }

    #[test]
    fn phase2_skips_forms_already_in_phase1() {
        // "evler" is both a root and ev + ler
        let p = pack(&["ev", "evler"], &[("ler", 1)], "evlr");
        let counts = CorpusCounts::from_pairs([("evler", 9)]);
        let p2 = build_phase2(&p, &counts, &VocabBuildConfig::new(100), &build_phase1(&p));
        assert!(p2.is_empty());
    }

    #[test]
    fn phase3_hand_trace() {
        let counts = CorpusCounts::from_pairs([("foo", 10), ("bar", 9), ("baz", 2)]);
        let existing = vec![VocabEntry::new("x", true, Provenance::Phase1Char)];
        let cfg = VocabBuildConfig::new(4 + 1 + 2);
        let p3 = build_phase3(&counts, &existing, &cfg).unwrap();
        let surf: Vec<&str> = p3.iter().map(|e| e.surface.as_str()).collect();
        assert_eq!(surf, vec!["foo", "bar"]);

        let cfg = VocabBuildConfig::new(5);
        assert!(build_phase3(&counts, &existing, &cfg).unwrap().is_empty());

        let covered = vec![
            VocabEntry::new("foo", true, Provenance::Phase1Root),
            VocabEntry::new("bar", true, Provenance::Phase1Root),
        ];
        assert!(build_phase3(&counts, &covered, &VocabBuildConfig::new(100))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn phase3_target_too_small() {
        let counts = CorpusCounts::from_pairs([("foo", 10)]);
        let existing = vec![VocabEntry::new("x", true, Provenance::Phase1Char); 3];
        let err = build_phase3(&counts, &existing, &VocabBuildConfig::new(6)).unwrap_err();
        assert!(matches!(err, Error::TargetTooSmall { minimum: 7 }));
    }
}
