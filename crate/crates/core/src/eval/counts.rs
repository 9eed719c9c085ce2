use std::fmt::Write as _;
use std::fs;
use std::io::BufRead;
use std::path::Path;
use std::sync::mpsc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::morph::pretok;
use crate::normalize::Normalization;

/// Word-type frequencies over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusCounts {
    counts: FxHashMap<String, u64>,
    total_occurrences: u64,
}

impl CorpusCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, u64)>) -> Self {
        let mut c = CorpusCounts::new();
        for (w, n) in pairs {
            c.add(w.into(), n);
        }
        c
    }

    pub fn add(&mut self, word: String, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(word).or_insert(0) += n;
        self.total_occurrences += n;
    }

    pub fn add_word(&mut self, word: &str) {
        if let Some(n) = self.counts.get_mut(word) {
            *n += 1;
        } else {
            self.counts.insert(word.to_string(), 1);
        }
        self.total_occurrences += 1;
    }

    pub fn merge(&mut self, other: CorpusCounts) {
        for (w, n) in other.counts {
            *self.counts.entry(w).or_insert(0) += n;
        }
        self.total_occurrences += other.total_occurrences;
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total_occurrences(&self) -> u64 {
        self.total_occurrences
    }

    pub fn unique_types(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, n)| (w.as_str(), *n))
    }

    /// Types ordered by descending frequency, then lexicographically.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.iter().collect();
        v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v
    }

    /// `word<TAB>count` lines in ranked order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (w, n) in self.ranked() {
            writeln!(out, "{w}\t{n}").unwrap();
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut c = CorpusCounts::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (w, n) = line
                .rsplit_once('\t')
                .ok_or_else(|| Error::malformed("counts", i + 1, "expected word<TAB>count"))?;
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| Error::malformed("counts", i + 1, format!("bad count {n:?}")))?;
            c.add(w.to_string(), n);
        }
        Ok(c)
    }

    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(&text)
    }
}

fn count_text(text: &str, norm: Normalization, into: &mut CorpusCounts) {
    let text = norm.apply(text);
    for w in pretok::words(&text) {
        into.add_word(w);
    }
}

/// Reads lines, failing on invalid UTF-8 with its absolute byte offset.
fn for_each_line<R: BufRead>(mut reader: R, mut f: impl FnMut(String)) -> Result<()> {
    let mut buf = Vec::new();
    let mut offset: u64 = 0;
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf)?;
        if n == 0 {
            return Ok(());
        }
        match String::from_utf8(std::mem::take(&mut buf)) {
            Ok(s) => f(s),
            Err(e) => {
                return Err(Error::InvalidUtf8 {
                    offset: offset + e.utf8_error().valid_up_to() as u64,
                })
            }
        }
        offset += n as u64;
    }
}

/// Streams a corpus and counts word types using the tokenizer's
/// pre-tokenization.
pub fn count_corpus<R: BufRead>(reader: R, norm: Normalization) -> Result<CorpusCounts> {
    let mut counts = CorpusCounts::new();
    for_each_line(reader, |line| count_text(&line, norm, &mut counts))?;
    Ok(counts)
}

/// Parallel [`count_corpus`]: batches of lines are counted on `threads`
/// workers and merged. The result does not depend on `threads`.
pub fn count_corpus_threaded<R: BufRead>(
    reader: R,
    norm: Normalization,
    threads: usize,
) -> Result<CorpusCounts> {
    if threads <= 1 {
        return count_corpus(reader, norm);
    }
    const BATCH: usize = 4096;
    std::thread::scope(|scope| {
        let (result_tx, result_rx) = mpsc::channel::<CorpusCounts>();
        let mut senders = Vec::new();
        for _ in 0..threads {
            let (tx, rx) = mpsc::sync_channel::<Vec<String>>(2);
            let result_tx = result_tx.clone();
            scope.spawn(move || {
                let mut local = CorpusCounts::new();
                for batch in rx {
                    for line in batch {
                        count_text(&line, norm, &mut local);
                    }
                }
                let _ = result_tx.send(local);
            });
            senders.push(tx);
        }
        drop(result_tx);

        let mut batch = Vec::with_capacity(BATCH);
        let mut next = 0usize;
        let read = for_each_line(reader, |line| {
            batch.push(line);
            if batch.len() == BATCH {
                let full = std::mem::replace(&mut batch, Vec::with_capacity(BATCH));
                let _ = senders[next % threads].send(full);
                next += 1;
            }
        });
        if !batch.is_empty() {
            let _ = senders[next % threads].send(batch);
        }
        drop(senders);

        let mut total = CorpusCounts::new();
        for part in result_rx {
            total.merge(part);
        }
        read.map(|_| total)
    })
}
