//! Grapheme-level byte-pair-encoding baseline.
//!
//! Model file:
//!
//! ```text
//! bpe v1 vocab_size=5
//! # alphabet	a	b	c
//! a	b
//! ab	c
//! ```

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rustc_hash::FxHashMap;
use unicode_segmentation::UnicodeSegmentation;

use crate::error::{Error, Result};
use crate::eval::CorpusCounts;
use crate::vocab::{escape_surface, unescape_surface};

const UNKNOWN: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpeModel {
    alphabet: Vec<String>,
    merges: Vec<(String, String)>,
    /// Symbol strings by id: alphabet first, then one per merge.
    symbols: Vec<String>,
    symbol_ids: FxHashMap<String, u32>,
    /// (left, right) -> (rank, merged id)
    ranks: FxHashMap<(u32, u32), (u32, u32)>,
}

impl BpeModel {
    /// Builds a model from an alphabet and merges in training order.
    pub fn new(
        alphabet: impl IntoIterator<Item = String>,
        merges: Vec<(String, String)>,
    ) -> Result<Self> {
        let alphabet: Vec<String> = alphabet
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut model = BpeModel {
            symbols: alphabet.clone(),
            symbol_ids: alphabet
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as u32))
                .collect(),
            alphabet,
            merges: Vec::with_capacity(merges.len()),
            ranks: FxHashMap::default(),
        };
        for (i, (l, r)) in merges.into_iter().enumerate() {
            let (Some(&a), Some(&b)) = (model.symbol_ids.get(&l), model.symbol_ids.get(&r)) else {
                return Err(Error::malformed(
                    "bpe",
                    i + 1,
                    format!("merge ({l:?}, {r:?}) uses an unknown symbol"),
                ));
            };
            if model.ranks.contains_key(&(a, b)) {
                return Err(Error::malformed("bpe", i + 1, format!("repeated merge ({l:?}, {r:?})")));
            }
            model.push_merge(a, b);
        }
        Ok(model)
    }

    fn push_merge(&mut self, a: u32, b: u32) -> u32 {
        let merged = format!("{}{}", self.symbols[a as usize], self.symbols[b as usize]);
        let id = match self.symbol_ids.get(&merged) {
            Some(&id) => id,
            None => {
                let id = self.symbols.len() as u32;
                self.symbols.push(merged.clone());
                self.symbol_ids.insert(merged, id);
                id
            }
        };
        let rank = self.merges.len() as u32;
        self.ranks.insert((a, b), (rank, id));
        self.merges.push((
            self.symbols[a as usize].clone(),
            self.symbols[b as usize].clone(),
        ));
        id
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    /// Alphabet size plus merge count.
    pub fn vocab_size(&self) -> usize {
        self.alphabet.len() + self.merges.len()
    }

    /// Applies merges in training order. Ranks with no occurrence in the
    /// current sequence are skipped, so each step jumps to the next
    /// applicable merge.
    pub fn tokenize(&self, word: &str) -> Vec<String> {
        self.tokenize_ids(word)
            .into_iter()
            .map(|(id, g)| match id {
                UNKNOWN => g.to_string(),
                id => self.symbols[id as usize].clone(),
            })
            .collect()
    }

    /// Number of graphemes in `word` outside the alphabet.
    pub fn unknown_count(&self, word: &str) -> usize {
        word.graphemes(true)
            .filter(|g| !self.is_base(g))
            .count()
    }

    fn is_base(&self, g: &str) -> bool {
        self.alphabet.binary_search_by(|s| s.as_str().cmp(g)).is_ok()
    }

    fn tokenize_ids<'a>(&self, word: &'a str) -> Vec<(u32, &'a str)> {
        let mut seq: Vec<(u32, &str)> = word
            .graphemes(true)
            .map(|g| match self.alphabet.binary_search_by(|s| s.as_str().cmp(g)) {
                Ok(i) => (i as u32, g),
                Err(_) => (UNKNOWN, g),
            })
            .collect();
        let mut next_rank = 0u32;
        loop {
            let best = seq
                .windows(2)
                .filter_map(|w| self.ranks.get(&(w[0].0, w[1].0)))
                .filter(|(rank, _)| *rank >= next_rank)
                .min_by_key(|(rank, _)| *rank);
            let Some(&(rank, merged)) = best else { break };
            next_rank = rank + 1;
            let (a, b) = self.pair_of_rank(rank);
            let mut out = Vec::with_capacity(seq.len());
            let mut i = 0;
            while i < seq.len() {
                if i + 1 < seq.len() && seq[i].0 == a && seq[i + 1].0 == b {
                    out.push((merged, ""));
                    i += 2;
                } else {
                    out.push(seq[i]);
                    i += 1;
                }
            }
            seq = out;
        }
        seq
    }

    fn pair_of_rank(&self, rank: u32) -> (u32, u32) {
        let (l, r) = &self.merges[rank as usize];
        (self.symbol_ids[l], self.symbol_ids[r])
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("bpe v1 vocab_size={}\n# alphabet", self.vocab_size());
        for s in &self.alphabet {
            write!(out, "\t{}", escape_surface(s)).unwrap();
        }
        out.push('\n');
        for (l, r) in &self.merges {
            writeln!(out, "{}\t{}", escape_surface(l), escape_surface(r)).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).unwrap_or("");
        let size: usize = header
            .strip_prefix("bpe v1 vocab_size=")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::malformed("bpe", 1, "expected `bpe v1 vocab_size=N`"))?;
        let mut alphabet = None;
        let mut merges = Vec::new();
        for (i, line) in lines {
            if let Some(rest) = line.strip_prefix("# alphabet") {
                let syms = rest
                    .split('\t')
                    .skip(1)
                    .map(|s| {
                        unescape_surface(s)
                            .ok_or_else(|| Error::malformed("bpe", i + 1, "bad escape"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                alphabet = Some(syms);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (l, r) = line
                .split_once('\t')
                .ok_or_else(|| Error::malformed("bpe", i + 1, "expected left<TAB>right"))?;
            let un = |s: &str| {
                unescape_surface(s).ok_or_else(|| Error::malformed("bpe", i + 1, "bad escape"))
            };
            merges.push((un(l)?, un(r)?));
        }
        let alphabet =
            alphabet.ok_or_else(|| Error::malformed("bpe", 2, "missing `# alphabet` line"))?;
        let model = BpeModel::new(alphabet, merges)?;
        if model.vocab_size() != size {
            return Err(Error::malformed(
                "bpe",
                1,
                format!("header says vocab_size={size}, file has {}", model.vocab_size()),
            ));
        }
        Ok(model)
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

pub fn bpe_tokenize(model: &BpeModel, word: &str) -> Vec<String> {
    model.tokenize(word)
}

#[derive(PartialEq, Eq)]
struct Candidate {
    count: u64,
    left: String,
    right: String,
    pair: (u32, u32),
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| Reverse((&self.left, &self.right)).cmp(&Reverse((&other.left, &other.right))))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Trainer {
    words: Vec<Vec<u32>>,
    freqs: Vec<u64>,
    pair_counts: FxHashMap<(u32, u32), u64>,
    /// Words that contained a pair at some point; may hold stale entries.
    pair_words: FxHashMap<(u32, u32), Vec<u32>>,
    heap: BinaryHeap<Candidate>,
}

impl Trainer {
    fn candidate(&self, model: &BpeModel, pair: (u32, u32), count: u64) -> Candidate {
        Candidate {
            count,
            left: model.symbols[pair.0 as usize].clone(),
            right: model.symbols[pair.1 as usize].clone(),
            pair,
        }
    }

    fn adjust(&mut self, word: &[u32], freq: u64, add: bool, touched: &mut Vec<(u32, u32)>) {
        for w in word.windows(2) {
            let pair = (w[0], w[1]);
            let c = self.pair_counts.entry(pair).or_insert(0);
            if add {
                *c += freq;
            } else {
                *c -= freq;
            }
            touched.push(pair);
        }
    }
}

/// Trains a frequency-weighted BPE model over word types. The most
/// frequent adjacent pair is merged until `vocab_size` symbols exist or no
/// pair remains; ties go to the lexicographically smaller pair.
pub fn train_bpe(counts: &CorpusCounts, vocab_size: usize) -> Result<BpeModel> {
    let ranked = counts.ranked();
    let alphabet: BTreeSet<String> = ranked
        .iter()
        .flat_map(|(w, _)| w.graphemes(true).map(str::to_string))
        .collect();
    if vocab_size < alphabet.len() {
        return Err(Error::VocabSizeTooSmall {
            alphabet: alphabet.len(),
        });
    }
    let mut model = BpeModel::new(alphabet, Vec::new())?;

    let mut t = Trainer {
        words: ranked
            .iter()
            .map(|(w, _)| w.graphemes(true).map(|g| model.symbol_ids[g]).collect())
            .collect(),
        freqs: ranked.iter().map(|(_, n)| *n).collect(),
        pair_counts: FxHashMap::default(),
        pair_words: FxHashMap::default(),
        heap: BinaryHeap::new(),
    };
    for (wi, word) in t.words.iter().enumerate() {
        for w in word.windows(2) {
            *t.pair_counts.entry((w[0], w[1])).or_insert(0) += t.freqs[wi];
            t.pair_words.entry((w[0], w[1])).or_default().push(wi as u32);
        }
    }
    let initial: Vec<Candidate> = t
        .pair_counts
        .iter()
        .map(|(&p, &c)| t.candidate(&model, p, c))
        .collect();
    t.heap.extend(initial);

    let mut touched = Vec::new();
    while model.vocab_size() < vocab_size {
        let Some(top) = t.heap.pop() else { break };
        let current = t.pair_counts.get(&top.pair).copied().unwrap_or(0);
        if current != top.count || current == 0 || model.ranks.contains_key(&top.pair) {
            continue;
        }
        let (a, b) = top.pair;
        let merged = model.push_merge(a, b);

        let mut affected = t.pair_words.remove(&top.pair).unwrap_or_default();
        affected.sort_unstable();
        affected.dedup();
        touched.clear();
        for wi in affected {
            let wi = wi as usize;
            let word = std::mem::take(&mut t.words[wi]);
            if !word.windows(2).any(|w| (w[0], w[1]) == (a, b)) {
                t.words[wi] = word;
                continue;
            }
            let freq = t.freqs[wi];
            t.adjust(&word, freq, false, &mut touched);
            let mut out = Vec::with_capacity(word.len());
            let mut i = 0;
            while i < word.len() {
                if i + 1 < word.len() && word[i] == a && word[i + 1] == b {
                    out.push(merged);
                    i += 2;
                } else {
                    out.push(word[i]);
                    i += 1;
                }
            }
            t.adjust(&out, freq, true, &mut touched);
            for w in out.windows(2) {
                if w[0] == merged || w[1] == merged {
                    t.pair_words.entry((w[0], w[1])).or_default().push(wi as u32);
                }
            }
            t.words[wi] = out;
        }
        touched.sort_unstable();
        touched.dedup();
        for &pair in &touched {
            let c = t.pair_counts[&pair];
            if c == 0 {
                t.pair_counts.remove(&pair);
            } else if !model.ranks.contains_key(&pair) {
                let cand = t.candidate(&model, pair, c);
                t.heap.push(cand);
            }
        }
    }
    Ok(model)
}
