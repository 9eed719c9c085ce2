#![allow(dead_code)]

pub mod oracle;
pub mod stubs;

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use morphotok::eval::{count_corpus, CorpusCounts};
use morphotok::pack::{
    AffixCategory, AffixEntry, AffixPosition, CategoryConstraint, PartOfSpeech, RootEntry,
    SyllablePattern, VerbChainTemplate,
};
use morphotok::script::{CharClass, ScriptTable};
use morphotok::vocab::{build_phase1, VocabMeta};
use morphotok::{
    build_vocabulary, load_language_pack, LanguagePack, Normalization, Tokenizer, TokenizerConfig,
    VocabBuildConfig, Vocabulary,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LANGS: [&str; 4] = ["tr", "fi", "sw", "ta"];

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(rel: &str) -> PathBuf {
    repo_root().join("fixtures").join(rel)
}

pub fn pack(lang: &str) -> LanguagePack {
    load_language_pack(fixture(lang)).unwrap()
}

pub fn corpus_text(lang: &str) -> String {
    fs::read_to_string(fixture(&format!("corpus/{lang}.txt"))).unwrap()
}

pub fn corpus_counts(lang: &str) -> CorpusCounts {
    let pack = pack(lang);
    let file = fs::File::open(fixture(&format!("corpus/{lang}.txt"))).unwrap();
    count_corpus(BufReader::new(file), pack.normalization).unwrap()
}

fn meta(pack: &LanguagePack) -> Option<VocabMeta> {
    Some(VocabMeta {
        language_id: pack.language_id.clone(),
        normalization: pack.normalization,
    })
}

/// Tokenizer whose vocabulary holds only the pack inventory, so corpus
/// words reach tier 1 and below.
pub fn phase1_tokenizer(lang: &str) -> Tokenizer {
    let pack = pack(lang);
    let vocab = Vocabulary::from_entries(build_phase1(&pack), meta(&pack)).unwrap();
    Tokenizer::new(pack, vocab, TokenizerConfig::default()).unwrap()
}

pub fn full_tokenizer(lang: &str, target: usize) -> Tokenizer {
    let pack = pack(lang);
    let counts = corpus_counts(lang);
    let vocab = build_vocabulary(&pack, &counts, &VocabBuildConfig::new(target)).unwrap();
    Tokenizer::new(pack, vocab, TokenizerConfig::default()).unwrap()
}

pub fn empty_vocab_tokenizer(pack: LanguagePack, max_affix_chain: usize) -> Tokenizer {
    let vocab = Vocabulary::from_entries(Vec::new(), meta(&pack)).unwrap();
    let config = TokenizerConfig {
        max_affix_chain,
        ..TokenizerConfig::default()
    };
    Tokenizer::new(pack, vocab, config).unwrap()
}

pub fn latin_script(letters: &str, vowels: &str) -> ScriptTable {
    ScriptTable::new(
        letters
            .chars()
            .map(|c| {
                let class = if vowels.contains(c) {
                    CharClass::Vowel
                } else {
                    CharClass::Consonant
                };
                (c.to_string(), class)
            })
            .collect(),
    )
}

const CATS: [AffixCategory; 4] = [
    AffixCategory::Case,
    AffixCategory::Tense,
    AffixCategory::Png,
    AffixCategory::Plural,
];

fn random_string(rng: &mut ChaCha8Rng, alphabet: &[char], min: usize, max: usize) -> String {
    let len = rng.random_range(min..=max);
    (0..len)
        .map(|_| alphabet[rng.random_range(0..alphabet.len())])
        .collect()
}

/// A valid random pack over a tiny alphabet, dense with overlapping
/// surfaces so that cover choice matters.
pub fn random_pack(seed: u64, max_roots: usize, max_affixes: usize) -> LanguagePack {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<char> = "abce".chars().collect();
    let n_roots = rng.random_range(1..=max_roots);
    let mut roots: Vec<RootEntry> = Vec::new();
    while roots.len() < n_roots {
        let lemma = random_string(&mut rng, &alphabet, 1, 4);
        if roots.iter().any(|r| r.lemma == lemma) {
            continue;
        }
        let mut stems = Vec::new();
        if rng.random_bool(0.3) {
            stems.push(random_string(&mut rng, &alphabet, 1, 4));
        }
        let stems: Vec<&str> = stems.iter().map(String::as_str).collect();
        roots.push(RootEntry::new(&lemma, PartOfSpeech::Noun, &stems));
    }
    let n_affixes = rng.random_range(1..=max_affixes);
    let with_prefixes = rng.random_bool(0.5);
    let mut affixes: Vec<AffixEntry> = Vec::new();
    while affixes.len() < n_affixes {
        let entry = {
            let surface = random_string(&mut rng, &alphabet, 1, 3);
            let position = if with_prefixes && rng.random_bool(0.3) {
                AffixPosition::Prefix
            } else {
                AffixPosition::Suffix
            };
            let cat = CATS[rng.random_range(0..CATS.len())];
            let group = format!(
                "{}{}{}",
                position.as_str(),
                cat.as_str(),
                rng.random_range(0..2)
            );
            AffixEntry {
                surface,
                position,
                category: cat,
                allomorph_group: group,
                chain_order: rng.random_range(0..4),
            }
        };
        let clash = affixes.iter().any(|a| {
            a.surface == entry.surface
                && a.position == entry.position
                && a.allomorph_group == entry.allomorph_group
        });
        if !clash {
            affixes.push(entry);
        }
    }
    let n_chains = rng.random_range(0..=3);
    let verb_chains = (0..n_chains)
        .map(|i| {
            let len = rng.random_range(1..=3);
            let sequence = (0..len)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        let a = &affixes[rng.random_range(0..affixes.len())];
                        CategoryConstraint {
                            category: a.category,
                            group: Some(a.allomorph_group.clone()),
                        }
                    } else {
                        CategoryConstraint {
                            category: CATS[rng.random_range(0..CATS.len())],
                            group: None,
                        }
                    }
                })
                .collect();
            VerbChainTemplate {
                name: format!("chain{i}"),
                sequence,
                example: None,
            }
        })
        .collect();
    LanguagePack {
        language_id: format!("rand{seed}"),
        roots,
        affixes,
        verb_chains,
        syllable_patterns: vec![
            SyllablePattern::parse("CV", 2).unwrap(),
            SyllablePattern::parse("V", 1).unwrap(),
        ],
        script: latin_script("abce", "ae"),
        normalization: Normalization::Nfc,
    }
}

/// Synthetic agglutinative language with two-way vowel harmony, plus a
/// training corpus and an independently sampled held-out corpus.
pub struct Synthetic {
    pub pack: LanguagePack,
    pub train: CorpusCounts,
    pub heldout: CorpusCounts,
}

const CONSONANTS: &str = "ptkbdgmnlrsvzfh";
const BACK: [char; 3] = ['a', 'o', 'u'];
const FRONT: [char; 3] = ['e', 'i', 'y'];
const SLOTS: [AffixCategory; 5] = [
    AffixCategory::Plural,
    AffixCategory::Png,
    AffixCategory::Case,
    AffixCategory::Postposition,
    AffixCategory::Clitic,
];

struct Morpheme {
    slot: usize,
    back: String,
    front: String,
}

struct SynthRoot {
    lemma: String,
    front: bool,
}

fn zipf_cdf(n: usize, s: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = (1..=n)
        .map(|r| {
            acc += 1.0 / (r as f64).powf(s);
            acc
        })
        .collect();
    for c in &mut cdf {
        *c /= acc;
    }
    cdf
}

fn draw(cdf: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    cdf.partition_point(|&c| c < u).min(cdf.len() - 1)
}

pub fn synthetic(roots: usize, morphemes: usize, occurrences: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cons: Vec<char> = CONSONANTS.chars().collect();
    let pick = |rng: &mut ChaCha8Rng, set: &[char]| set[rng.random_range(0..set.len())];

    let mut synth_roots: Vec<SynthRoot> = Vec::new();
    while synth_roots.len() < roots {
        let front = rng.random_bool(0.5);
        let vowels = if front { &FRONT } else { &BACK };
        let syllables = rng.random_range(1..=2);
        let mut lemma = String::new();
        for _ in 0..syllables {
            lemma.push(pick(&mut rng, &cons));
            lemma.push(pick(&mut rng, vowels));
        }
        lemma.push(pick(&mut rng, &cons));
        if synth_roots.iter().any(|r| r.lemma == lemma) {
            continue;
        }
        synth_roots.push(SynthRoot { lemma, front });
    }

    let mut ms: Vec<Morpheme> = Vec::new();
    while ms.len() < morphemes {
        let slot = ms.len() % SLOTS.len();
        let harmonic = rng.random_range(0..2);
        let onset = if rng.random_bool(0.7) {
            Some(pick(&mut rng, &cons))
        } else {
            None
        };
        let coda = if rng.random_bool(0.5) {
            Some(pick(&mut rng, &cons))
        } else {
            None
        };
        let build = |v: char| {
            let mut s = String::new();
            s.extend(onset);
            s.push(v);
            s.extend(coda);
            s
        };
        let back = build(BACK[harmonic * 2]);
        let front = build(FRONT[harmonic]);
        if ms.iter().any(|m| m.back == back) {
            continue;
        }
        ms.push(Morpheme { slot, back, front });
    }

    let mut affixes = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let cat = SLOTS[m.slot];
        let order = m.slot as i32 + 1;
        let group = format!("M{i}");
        affixes.push(AffixEntry::suffix(&m.back, cat, &group, order));
        affixes.push(AffixEntry::suffix(&m.front, cat, &group, order));
    }
    let mut letters: String = CONSONANTS.to_string();
    letters.extend(BACK);
    letters.extend(FRONT);
    let pack = LanguagePack {
        language_id: "synth".into(),
        roots: synth_roots
            .iter()
            .map(|r| RootEntry::new(&r.lemma, PartOfSpeech::Noun, &[]))
            .collect(),
        affixes,
        verb_chains: Vec::new(),
        syllable_patterns: ["CVC", "CV", "VC", "V"]
            .iter()
            .enumerate()
            .map(|(i, p)| SyllablePattern::parse(p, 4 - i as i32).unwrap())
            .collect(),
        script: latin_script(&letters, "aoueiy"),
        normalization: Normalization::Nfc,
    };

    let root_cdf = zipf_cdf(roots, 1.0);
    let slot_members: Vec<Vec<usize>> = (0..SLOTS.len())
        .map(|s| (0..ms.len()).filter(|&i| ms[i].slot == s).collect())
        .collect();
    let member_cdfs: Vec<Vec<f64>> = slot_members.iter().map(|m| zipf_cdf(m.len(), 1.1)).collect();
    let affix_count_cdf = [0.2, 0.5, 0.75, 0.9, 1.0];

    let generate = |rng: &mut ChaCha8Rng| {
        let mut counts = CorpusCounts::new();
        for _ in 0..occurrences {
            let root = &synth_roots[draw(&root_cdf, rng)];
            let k = draw(&affix_count_cdf, rng);
            let mut slots: Vec<usize> = rand::seq::index::sample(rng, SLOTS.len(), k).into_vec();
            slots.sort_unstable();
            let mut word = root.lemma.clone();
            for s in slots {
                let m = &ms[slot_members[s][draw(&member_cdfs[s], rng)]];
                word.push_str(if root.front { &m.front } else { &m.back });
            }
            counts.add_word(&word);
        }
        counts
    };
    let train = generate(&mut rng);
    let heldout = generate(&mut rng);
    Synthetic {
        pack,
        train,
        heldout,
    }
}

/// Compares `actual` with `fixtures/golden/<name>`. Setting `BLESS=1`
/// rewrites the file instead.
pub fn golden(name: &str, actual: &str) {
    let path = fixture(&format!("golden/{name}"));
    if std::env::var_os("BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with BLESS=1 to create)", path.display()));
    assert!(want == actual, "{name} differs from golden file");
}

/// Code point pools mixing the fixture scripts with material that stresses
/// normalization and grapheme segmentation.
const POOLS: &[(u32, u32)] = &[
    (0x20, 0x7e),
    (0x09, 0x0d),
    (0xa0, 0x17f),
    (0x300, 0x36f),
    (0xb80, 0xbff),
    (0x900, 0x97f),
    (0x1100, 0x11ff),
    (0xac00, 0xac40),
    (0x200b, 0x200d),
    (0x2000, 0x206f),
    (0x3000, 0x303f),
    (0x4e00, 0x4e40),
    (0xfb00, 0xfb06),
    (0x1f300, 0x1f3ff),
    (0x1f3fb, 0x1f3ff),
    (0xfe00, 0xfe0f),
    (0x10000, 0x10fffd),
];

pub fn random_text(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    let mut s = String::new();
    while s.chars().count() < len {
        let (lo, hi) = POOLS[rng.random_range(0..POOLS.len())];
        if let Some(c) = char::from_u32(rng.random_range(lo..=hi)) {
            s.push(c);
        }
    }
    s
}

pub const DOCUMENTED_EXAMPLES: &[(&str, &str, &[&str])] = &[
    ("tr", "evlerinden", &["ev", "ler", "in", "den"]),
    ("fi", "taloissaan", &["talo", "i", "ssa", "an"]),
    ("sw", "ninawapenda", &["ni", "na", "wa", "pend", "a"]),
    (
        "ta",
        "படித்துக்கொண்டிருக்கிறேன்",
        &["படி", "த்து", "க்கொண்டிரு", "க்கிற", "ேன்"],
    ),
];

/// Checks the cascade on one word and returns the tier used.
pub fn check_tiers(tok: &Tokenizer, word: &str) -> u8 {
    let seg = tok.tokenize_word(word).unwrap();
    assert!(seg.is_aligned(), "{word}");
    assert_eq!(seg.tokens.iter().map(|t| t.surface.as_str()).collect::<String>(), word);
    assert_eq!(seg.tier_used, seg.tokens.iter().map(|t| t.tier).max().unwrap());
    if tok.vocab().is_whole_word(word) {
        assert_eq!(seg.tokens.len(), 1, "{word}");
        assert_eq!(seg.tier_used, 0, "{word}");
    } else if tok.decompose(word).is_some() {
        assert_eq!(seg.tier_used, 1, "{word}");
        assert!(seg.root_lemma.is_some());
    } else {
        assert!(seg.tier_used >= 2, "{word}");
    }
    seg.tier_used
}

