use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use morphotok::pack::{AffixEntry, AffixPosition, LanguagePack};
use morphotok::{TokenCategory, Tokenizer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Key = (usize, Reverse<usize>, bool, i64, Vec<String>);

/// Expected tier-1 output: (surface, category) per token and the root lemma.
pub type Expected = (Vec<(String, TokenCategory)>, String);

/// Exhaustive reference: enumerates every `prefix* root suffix*` cover by
/// plain substring lookup, scores each one and keeps the minimum.
pub struct Oracle<'p> {
    pack: &'p LanguagePack,
    prefixes: HashMap<&'p str, Vec<&'p AffixEntry>>,
    suffixes: HashMap<&'p str, Vec<&'p AffixEntry>>,
    max_affixes: usize,
}

struct Cover<'p> {
    prefixes: Vec<(&'p AffixEntry, String)>,
    root: (String, String),
    suffixes: Vec<(&'p AffixEntry, String)>,
}

impl<'p> Oracle<'p> {
    pub fn new(pack: &'p LanguagePack, max_affixes: usize) -> Self {
        let mut prefixes: HashMap<&str, Vec<&AffixEntry>> = HashMap::new();
        let mut suffixes: HashMap<&str, Vec<&AffixEntry>> = HashMap::new();
        for a in &pack.affixes {
            let map = match a.position {
                AffixPosition::Prefix => &mut prefixes,
                AffixPosition::Suffix => &mut suffixes,
            };
            map.entry(a.surface.as_str()).or_default().push(a);
        }
        Oracle {
            pack,
            prefixes,
            suffixes,
            max_affixes,
        }
    }

    fn root_lemma(&self, stem: &str) -> Option<&'p str> {
        self.pack
            .roots
            .iter()
            .find(|r| r.surface_stems.iter().any(|s| s == stem))
            .map(|r| r.lemma.as_str())
    }

    pub fn analyze(&self, word: &str) -> Option<Expected> {
        let bounds: Vec<usize> = word
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(word.len()))
            .collect();
        let mut covers = Vec::new();
        self.prefix_step(word, &bounds, 0, Vec::new(), &mut covers);
        covers
            .into_iter()
            .map(|c| (self.key(&c), c))
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(key, c)| {
                let affix_cat = if key.2 {
                    TokenCategory::Affix
                } else {
                    TokenCategory::VerbChainElement
                };
                let mut tokens: Vec<(String, TokenCategory)> = c
                    .prefixes
                    .iter()
                    .map(|(_, s)| (s.clone(), affix_cat))
                    .collect();
                tokens.push((c.root.0.clone(), TokenCategory::Root));
                tokens.extend(c.suffixes.iter().map(|(_, s)| (s.clone(), affix_cat)));
                (tokens, c.root.1.clone())
            })
    }

    fn prefix_step(
        &self,
        word: &str,
        bounds: &[usize],
        at: usize,
        prefixes: Vec<(&'p AffixEntry, String)>,
        out: &mut Vec<Cover<'p>>,
    ) {
        let pos = bounds[at];
        for end in bounds.iter().skip(at + 1) {
            let stem = &word[pos..*end];
            if let Some(lemma) = self.root_lemma(stem) {
                let end_at = bounds.iter().position(|b| b == end).unwrap();
                let cover = Cover {
                    prefixes: prefixes.clone(),
                    root: (stem.to_string(), lemma.to_string()),
                    suffixes: Vec::new(),
                };
                self.suffix_step(word, bounds, end_at, cover, out);
            }
        }
        if prefixes.len() >= self.max_affixes {
            return;
        }
        for (k, end) in bounds.iter().enumerate().skip(at + 1) {
            if *end == word.len() {
                break;
            }
            let surface = &word[pos..*end];
            for a in self.prefixes.get(surface).into_iter().flatten() {
                if prefixes.last().is_some_and(|(p, _)| a.chain_order > p.chain_order) {
                    continue;
                }
                let mut next = prefixes.clone();
                next.push((a, surface.to_string()));
                self.prefix_step(word, bounds, k, next, out);
            }
        }
    }

    fn suffix_step(
        &self,
        word: &str,
        bounds: &[usize],
        at: usize,
        cover: Cover<'p>,
        out: &mut Vec<Cover<'p>>,
    ) {
        if at == bounds.len() - 1 {
            out.push(cover);
            return;
        }
        if cover.prefixes.len() + cover.suffixes.len() >= self.max_affixes {
            return;
        }
        let pos = bounds[at];
        for (k, end) in bounds.iter().enumerate().skip(at + 1) {
            let surface = &word[pos..*end];
            for a in self.suffixes.get(surface).into_iter().flatten() {
                if cover.suffixes.last().is_some_and(|(p, _)| a.chain_order < p.chain_order) {
                    continue;
                }
                let mut suffixes = cover.suffixes.clone();
                suffixes.push((a, surface.to_string()));
                let next = Cover {
                    prefixes: cover.prefixes.clone(),
                    root: cover.root.clone(),
                    suffixes,
                };
                self.suffix_step(word, bounds, k, next, out);
            }
        }
    }

    /// Smaller is better. The chain flag is `false` when a template matches.
    fn key(&self, c: &Cover<'p>) -> Key {
        let affixes: Vec<&AffixEntry> = c
            .prefixes
            .iter()
            .chain(&c.suffixes)
            .map(|(a, _)| *a)
            .collect();
        let chain = !affixes.is_empty()
            && self.pack.verb_chains.iter().any(|t| {
                t.sequence.len() == affixes.len()
                    && t.sequence.iter().zip(&affixes).all(|(slot, a)| {
                        slot.category == a.category
                            && slot.group.as_ref().is_none_or(|g| *g == a.allomorph_group)
                    })
            });
        (
            1 + affixes.len(),
            Reverse(c.root.0.chars().count()),
            !chain,
            affixes.iter().map(|a| i64::from(a.chain_order)).sum(),
            c.prefixes
                .iter()
                .chain(&c.suffixes)
                .map(|(_, s)| s.clone())
                .collect(),
        )
    }
}

pub fn actual(tok: &Tokenizer, word: &str) -> Option<Expected> {
    let tokens = tok.decompose_morphological(word)?;
    let seg = tok.tokenize_word(word).unwrap();
    assert_eq!(seg.tier_used, 1, "{word}");
    assert_eq!(seg.tokens, tokens, "{word}");
    Some((
        tokens.into_iter().map(|t| (t.surface, t.category)).collect(),
        seg.root_lemma.unwrap(),
    ))
}

/// Every word of at most `max_chars` characters that is a valid cover
/// under the ordering rules with at most `max_affixes` affixes.
pub fn formable_words(pack: &LanguagePack, max_affixes: usize, max_chars: usize) -> BTreeSet<String> {
    let prefixes: Vec<&AffixEntry> = pack
        .affixes
        .iter()
        .filter(|a| a.position == AffixPosition::Prefix)
        .collect();
    let suffixes: Vec<&AffixEntry> = pack
        .affixes
        .iter()
        .filter(|a| a.position == AffixPosition::Suffix)
        .collect();
    let stems: BTreeSet<&str> = pack
        .roots
        .iter()
        .flat_map(|r| r.surface_stems.iter().map(String::as_str))
        .collect();

    let mut heads: Vec<(String, usize, i32)> = vec![(String::new(), 0, i32::MAX)];
    let mut i = 0;
    while i < heads.len() {
        let (s, n, last) = heads[i].clone();
        i += 1;
        if n == max_affixes {
            continue;
        }
        for p in &prefixes {
            if p.chain_order <= last && s.chars().count() + p.surface.chars().count() < max_chars {
                heads.push((format!("{s}{}", p.surface), n + 1, p.chain_order));
            }
        }
    }

    let mut words = BTreeSet::new();
    let mut stack: Vec<(String, usize, i32)> = Vec::new();
    for (head, n, _) in &heads {
        for stem in &stems {
            let w = format!("{head}{stem}");
            if w.chars().count() <= max_chars {
                stack.push((w, *n, i32::MIN));
            }
        }
    }
    while let Some((w, n, last)) = stack.pop() {
        if n < max_affixes {
            for s in &suffixes {
                if s.chain_order >= last && w.chars().count() + s.surface.chars().count() <= max_chars {
                    stack.push((format!("{w}{}", s.surface), n + 1, s.chain_order));
                }
            }
        }
        words.insert(w);
    }
    words
}

pub fn perturb(word: &str, rng: &mut ChaCha8Rng) -> String {
    let alphabet = ['a', 'b', 'c', 'e'];
    let mut chars: Vec<char> = word.chars().collect();
    let edits = rng.random_range(1..=2);
    for _ in 0..edits {
        let c = alphabet[rng.random_range(0..alphabet.len())];
        match rng.random_range(0..3) {
            0 if !chars.is_empty() => {
                let i = rng.random_range(0..chars.len());
                chars[i] = c;
            }
            1 if chars.len() > 1 => {
                chars.remove(rng.random_range(0..chars.len()));
            }
            _ => chars.insert(rng.random_range(0..=chars.len()), c),
        }
    }
    chars.into_iter().collect()
}

pub struct Agreement {
    pub packs: usize,
    pub words: usize,
    pub with_cover: usize,
    pub mismatches: Vec<String>,
}

/// Runs the oracle against the analyzer on one random pack per seed, with
/// at most `max_entries` roots and `max_entries` affixes.
pub fn run_equivalence(
    seeds: std::ops::Range<u64>,
    max_entries: usize,
    perturbations: usize,
) -> Agreement {
    let mut agreement = Agreement {
        packs: 0,
        words: 0,
        with_cover: 0,
        mismatches: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in seeds {
        let pack = super::random_pack(seed, max_entries, max_entries);
        let max_affixes = 1 + (seed as usize % 6);
        let tok = super::empty_vocab_tokenizer(pack.clone(), max_affixes);
        let oracle = Oracle::new(&pack, max_affixes);
        let formable = formable_words(&pack, max_affixes, 15);
        let formable_list: Vec<&String> = formable.iter().collect();
        let mut words: Vec<String> = formable.iter().cloned().collect();
        for _ in 0..perturbations {
            let base = formable_list[rng.random_range(0..formable_list.len())];
            words.push(perturb(base, &mut rng));
        }
        for w in &words {
            if w.is_empty() {
                continue;
            }
            let want = oracle.analyze(w);
            let got = actual(&tok, w);
            agreement.words += 1;
            if want.is_some() {
                agreement.with_cover += 1;
            }
            if want != got {
                agreement.mismatches.push(format!(
                    "pack {seed} word {w:?}: oracle {want:?}, analyzer {got:?}"
                ));
            }
        }
        agreement.packs += 1;
    }
    agreement
}

