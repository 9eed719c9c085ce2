//! Corpus statistics, evaluation sets and tokenizer comparison.

mod adapter;
mod counts;
mod sample;
mod stats;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

pub use adapter::{AdapterOutput, BpeAdapter, ExternAdapter, MorphoAdapter, TokenizerAdapter};
pub use counts::{count_corpus, count_corpus_threaded, CorpusCounts};
pub use sample::{build_eval_set, stratified_sample, StratifiedSample};
pub use stats::{avg_grapheme_length, corpus_stats, CorpusStatsReport, StrataSpec, Stratum, StratumCount};

use crate::error::{Error, Result};
use crate::morph::{TokenCategory, Tokenizer};

/// Words per word-level tier: 0, 1, and 2 or higher.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TierHistogram {
    pub tier0: u64,
    pub tier1: u64,
    pub tier2_plus: u64,
}

impl TierHistogram {
    pub fn total(&self) -> u64 {
        self.tier0 + self.tier1 + self.tier2_plus
    }

    pub fn add(&mut self, tier: u8, weight: u64) {
        match tier {
            0 => self.tier0 += weight,
            1 => self.tier1 += weight,
            _ => self.tier2_plus += weight,
        }
    }

    /// Shares of tier 0, 1 and 2+.
    pub fn shares(&self) -> [f64; 3] {
        let t = self.total() as f64;
        if t == 0.0 {
            return [0.0; 3];
        }
        [
            self.tier0 as f64 / t,
            self.tier1 as f64 / t,
            self.tier2_plus as f64 / t,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FertilityReport {
    pub tokenizer_label: String,
    pub vocab_size: Option<usize>,
    pub word_count: u64,
    pub token_count: u64,
    /// token_count / word_count, unrounded.
    pub fertility: f64,
    pub tier_histogram: Option<TierHistogram>,
    pub root_preservation_rate: Option<f64>,
    pub throughput_words_per_sec: Option<f64>,
    pub frequency_weighted: bool,
}

impl FertilityReport {
    /// Builds a report from totals; `word_count` must be positive.
    pub fn from_totals(label: impl Into<String>, word_count: u64, token_count: u64) -> Self {
        FertilityReport {
            tokenizer_label: label.into(),
            vocab_size: None,
            word_count,
            token_count,
            fertility: token_count as f64 / word_count as f64,
            tier_histogram: None,
            root_preservation_rate: None,
            throughput_words_per_sec: None,
            frequency_weighted: false,
        }
    }

    /// Fertility rounded to two decimals.
    pub fn fertility_rounded(&self) -> String {
        format!("{:.2}", self.fertility)
    }

    /// `key<TAB>value` records in a fixed order.
    pub fn records(&self) -> Vec<(String, String)> {
        let mut r = vec![
            ("tokenizer".to_string(), self.tokenizer_label.clone()),
            (
                "vocab_size".to_string(),
                self.vocab_size.map_or("-".to_string(), |v| v.to_string()),
            ),
            ("frequency_weighted".to_string(), self.frequency_weighted.to_string()),
            ("word_count".to_string(), self.word_count.to_string()),
            ("token_count".to_string(), self.token_count.to_string()),
            ("fertility".to_string(), format!("{}", self.fertility)),
            ("fertility_rounded".to_string(), self.fertility_rounded()),
        ];
        if let Some(h) = &self.tier_histogram {
            let s = h.shares();
            for (i, (name, n)) in [("tier0", h.tier0), ("tier1", h.tier1), ("tier2_plus", h.tier2_plus)]
                .into_iter()
                .enumerate()
            {
                r.push((format!("{name}.count"), n.to_string()));
                r.push((format!("{name}.share"), format!("{:.6}", s[i])));
            }
        }
        if let Some(p) = self.root_preservation_rate {
            r.push(("root_preservation_rate".to_string(), format!("{p:.6}")));
        }
        if let Some(t) = self.throughput_words_per_sec {
            r.push(("throughput_words_per_sec".to_string(), format!("{t:.1}")));
        }
        r
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions<'a> {
    /// Worker threads over word shards; 0 or 1 runs inline.
    pub threads: usize,
    /// Weight each word by its corpus frequency instead of counting it once.
    pub weights: Option<&'a CorpusCounts>,
}

struct Partial {
    words: u64,
    tokens: u64,
    tiers: TierHistogram,
    has_tiers: bool,
}

fn evaluate_shard(
    adapter: &dyn TokenizerAdapter,
    words: &[&str],
    weights: Option<&CorpusCounts>,
) -> Result<Partial> {
    let outputs = adapter.tokenize_batch(words)?;
    let mut p = Partial {
        words: 0,
        tokens: 0,
        tiers: TierHistogram::default(),
        has_tiers: false,
    };
    for (word, out) in words.iter().zip(outputs) {
        if !aligned(word, &out.tokens) {
            return Err(Error::AlignmentViolation {
                word: word.to_string(),
                tokens: out.tokens,
            });
        }
        let w = weights.map_or(1, |c| c.get(word).max(1));
        p.words += w;
        p.tokens += w * out.tokens.len() as u64;
        if let Some(t) = out.tier {
            p.has_tiers = true;
            p.tiers.add(t, w);
        }
    }
    Ok(p)
}

fn aligned(word: &str, tokens: &[String]) -> bool {
    let mut rest = word;
    for t in tokens {
        match rest.strip_prefix(t.as_str()) {
            Some(r) if !t.is_empty() => rest = r,
            _ => return false,
        }
    }
    rest.is_empty()
}

/// Tokenizes every word, checks surface alignment and sums token counts.
pub fn evaluate<S: AsRef<str> + Sync>(
    adapter: &dyn TokenizerAdapter,
    words: &[S],
    options: &EvalOptions<'_>,
) -> Result<FertilityReport> {
    if words.is_empty() {
        return Err(Error::EmptyWordList);
    }
    let words: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
    let partials: Vec<Partial> = if options.threads <= 1 {
        vec![evaluate_shard(adapter, &words, options.weights)?]
    } else {
        let chunk = words.len().div_ceil(options.threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = words
                .chunks(chunk)
                .map(|part| scope.spawn(move || evaluate_shard(adapter, part, options.weights)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("evaluation worker panicked"))
                .collect::<Result<Vec<_>>>()
        })?
    };
    let mut report = FertilityReport::from_totals(adapter.label(), 0, 0);
    let mut tiers = TierHistogram::default();
    let mut has_tiers = false;
    for p in partials {
        report.word_count += p.words;
        report.token_count += p.tokens;
        tiers.tier0 += p.tiers.tier0;
        tiers.tier1 += p.tiers.tier1;
        tiers.tier2_plus += p.tiers.tier2_plus;
        has_tiers |= p.has_tiers;
    }
    report.fertility = report.token_count as f64 / report.word_count as f64;
    report.vocab_size = adapter.vocab_size();
    report.tier_histogram = has_tiers.then_some(tiers);
    report.frequency_weighted = options.weights.is_some();
    Ok(report)
}

/// Share of tier-1 words whose root token is the matched root's lemma.
/// `None` when no word reaches tier 1.
pub fn root_preservation<S: AsRef<str>>(tokenizer: &Tokenizer, words: &[S]) -> Option<f64> {
    let mut tier1 = 0usize;
    let mut preserved = 0usize;
    for w in words {
        let Ok(seg) = tokenizer.tokenize_word(w.as_ref()) else {
            continue;
        };
        if seg.tier_used != 1 {
            continue;
        }
        tier1 += 1;
        let root = seg.tokens.iter().find(|t| t.category == TokenCategory::Root);
        if let (Some(root), Some(lemma)) = (root, &seg.root_lemma) {
            if &root.surface == lemma {
                preserved += 1;
            }
        }
    }
    (tier1 > 0).then(|| preserved as f64 / tier1 as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputReport {
    pub label: String,
    /// Median over the timed repetitions.
    pub words_per_sec: f64,
    pub word_count: usize,
    pub repetitions: usize,
    pub samples: Vec<f64>,
    pub hardware: String,
}

/// Single-threaded words/sec: one untimed warm-up pass, then the median of
/// `repetitions` timed passes. Fewer than 3 repetitions are raised to 3.
pub fn throughput_bench<S: AsRef<str>>(
    adapter: &dyn TokenizerAdapter,
    words: &[S],
    repetitions: usize,
) -> Result<ThroughputReport> {
    if words.is_empty() {
        return Err(Error::EmptyWordList);
    }
    let words: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
    let repetitions = repetitions.max(3);
    adapter.tokenize_batch(&words)?;
    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let out = adapter.tokenize_batch(&words)?;
        let secs = start.elapsed().as_secs_f64();
        std::hint::black_box(out);
        samples.push(words.len() as f64 / secs.max(1e-9));
    }
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    Ok(ThroughputReport {
        label: adapter.label(),
        words_per_sec: median,
        word_count: words.len(),
        repetitions,
        samples,
        hardware: hardware_note(),
    })
}

pub fn hardware_note() -> String {
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{}-{}, {cpus} logical cpus, single-threaded",
        std::env::consts::ARCH,
        std::env::consts::OS
    )
}

/// Comparison table in the layout of a fertility results table.
pub fn format_comparison(reports: &[FertilityReport]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<32} {:>10} {:>10} {:>10} {:>9} {:>8} {:>8} {:>8}",
        "Tokenizer", "Vocab", "Words", "Tokens", "Fertility", "T0", "T1", "T2+"
    )
    .unwrap();
    for r in reports {
        let vocab = r.vocab_size.map_or("-".to_string(), |v| v.to_string());
        let (t0, t1, t2) = match &r.tier_histogram {
            Some(h) => {
                let s = h.shares();
                (
                    format!("{:.1}%", 100.0 * s[0]),
                    format!("{:.1}%", 100.0 * s[1]),
                    format!("{:.1}%", 100.0 * s[2]),
                )
            }
            None => ("-".into(), "-".into(), "-".into()),
        };
        writeln!(
            out,
            "{:<32} {:>10} {:>10} {:>10} {:>9} {:>8} {:>8} {:>8}",
            r.tokenizer_label,
            vocab,
            r.word_count,
            r.token_count,
            r.fertility_rounded(),
            t0,
            t1,
            t2
        )
        .unwrap();
    }
    out
}

/// Writes `key<TAB>value` lines; multiple reports are prefixed `N.key`.
pub fn write_records(path: impl AsRef<Path>, reports: &[FertilityReport]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, records_text(reports)).map_err(|e| Error::io(path, e))
}

pub fn records_text(reports: &[FertilityReport]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        for (k, v) in r.records() {
            if reports.len() == 1 {
                writeln!(out, "{k}\t{v}").unwrap();
            } else {
                writeln!(out, "{i}.{k}\t{v}").unwrap();
            }
        }
    }
    out
}
