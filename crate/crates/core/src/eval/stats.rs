use std::fmt;
use std::str::FromStr;

use unicode_segmentation::UnicodeSegmentation;

use super::CorpusCounts;
use crate::error::{Error, Result};

/// Inclusive frequency band; `upper: None` is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub label: String,
    pub lower: u64,
    pub upper: Option<u64>,
}

impl Stratum {
    pub fn new(lower: u64, upper: Option<u64>) -> Self {
        let label = match upper {
            None => format!("freq>={lower}"),
            Some(u) if u == lower => format!("freq={lower}"),
            Some(u) => format!("freq {lower}-{u}"),
        };
        Stratum {
            label,
            lower,
            upper,
        }
    }

    pub fn contains(&self, freq: u64) -> bool {
        freq >= self.lower && self.upper.is_none_or(|u| freq <= u)
    }
}

/// A list of strata that together cover every frequency ≥ 1 exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataSpec {
    strata: Vec<Stratum>,
}

impl StrataSpec {
    pub fn new(mut strata: Vec<Stratum>) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidStrata("no strata".into()));
        }
        strata.sort_by(|a, b| b.lower.cmp(&a.lower));
        for s in &strata {
            if s.lower == 0 {
                return Err(Error::InvalidStrata(format!("{}: frequencies start at 1", s.label)));
            }
            if s.upper.is_some_and(|u| u < s.lower) {
                return Err(Error::InvalidStrata(format!("{}: upper below lower", s.label)));
            }
        }
        if strata[0].upper.is_some() {
            return Err(Error::InvalidStrata("highest stratum must be unbounded".into()));
        }
        for pair in strata.windows(2) {
            let (hi, lo) = (&pair[0], &pair[1]);
            match lo.upper {
                None => {
                    return Err(Error::InvalidStrata(format!(
                        "{} and {} overlap",
                        lo.label, hi.label
                    )))
                }
                Some(u) if u >= hi.lower => {
                    return Err(Error::InvalidStrata(format!(
                        "{} and {} overlap",
                        lo.label, hi.label
                    )))
                }
                Some(u) if u + 1 < hi.lower => {
                    return Err(Error::InvalidStrata(format!(
                        "gap between {} and {}",
                        lo.label, hi.label
                    )))
                }
                _ => {}
            }
        }
        if strata.last().unwrap().lower != 1 {
            return Err(Error::InvalidStrata("frequency 1 is not covered".into()));
        }
        Ok(StrataSpec { strata })
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }
}

/// ≥100, 10–99, 5–9, 3–4, 2, 1.
impl Default for StrataSpec {
    fn default() -> Self {
        StrataSpec::new(vec![
            Stratum::new(100, None),
            Stratum::new(10, Some(99)),
            Stratum::new(5, Some(9)),
            Stratum::new(3, Some(4)),
            Stratum::new(2, Some(2)),
            Stratum::new(1, Some(1)),
        ])
        .expect("default strata partition the axis")
    }
}

/// Comma-separated bands: `100+,10-99,5-9,3-4,2,1`.
impl FromStr for StrataSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |part: &str| Error::InvalidStrata(format!("cannot parse {part:?}"));
        let strata = s
            .split(',')
            .map(str::trim)
            .map(|part| {
                if let Some(lo) = part.strip_suffix('+') {
                    let lo = lo.parse().map_err(|_| bad(part))?;
                    Ok(Stratum::new(lo, None))
                } else if let Some((lo, hi)) = part.split_once('-') {
                    let lo = lo.parse().map_err(|_| bad(part))?;
                    let hi = hi.parse().map_err(|_| bad(part))?;
                    Ok(Stratum::new(lo, Some(hi)))
                } else {
                    let n = part.parse().map_err(|_| bad(part))?;
                    Ok(Stratum::new(n, Some(n)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        StrataSpec::new(strata)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumCount {
    pub stratum: Stratum,
    pub type_count: usize,
    pub occurrences: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStatsReport {
    pub total_occurrences: u64,
    pub unique_types: usize,
    pub strata: Vec<StratumCount>,
    pub hapax_count: usize,
    /// hapax_count / unique_types; 0 for an empty corpus.
    pub hapax_rate: f64,
    /// Mean grapheme length of an evaluation set, when one was given.
    pub avg_word_length_graphemes: Option<f64>,
}

pub fn corpus_stats(counts: &CorpusCounts, strata: &StrataSpec) -> CorpusStatsReport {
    let mut buckets: Vec<StratumCount> = strata
        .strata()
        .iter()
        .map(|s| StratumCount {
            stratum: s.clone(),
            type_count: 0,
            occurrences: 0,
        })
        .collect();
    let mut hapax = 0;
    for (_, n) in counts.iter() {
        if n == 1 {
            hapax += 1;
        }
        let b = buckets
            .iter_mut()
            .find(|b| b.stratum.contains(n))
            .expect("strata cover every frequency");
        b.type_count += 1;
        b.occurrences += n;
    }
    let types = counts.unique_types();
    CorpusStatsReport {
        total_occurrences: counts.total_occurrences(),
        unique_types: types,
        strata: buckets,
        hapax_count: hapax,
        hapax_rate: if types == 0 {
            0.0
        } else {
            hapax as f64 / types as f64
        },
        avg_word_length_graphemes: None,
    }
}

/// Mean extended-grapheme-cluster length; `None` for an empty list.
pub fn avg_grapheme_length<S: AsRef<str>>(words: &[S]) -> Option<f64> {
    if words.is_empty() {
        return None;
    }
    let total: usize = words.iter().map(|w| w.as_ref().graphemes(true).count()).sum();
    Some(total as f64 / words.len() as f64)
}

impl CorpusStatsReport {
    pub fn with_eval_set<S: AsRef<str>>(mut self, words: &[S]) -> Self {
        self.avg_word_length_graphemes = avg_grapheme_length(words);
        self
    }

    /// `key<TAB>value` records in a fixed order.
    pub fn records(&self) -> Vec<(String, String)> {
        let mut r = vec![
            ("total_occurrences".to_string(), self.total_occurrences.to_string()),
            ("unique_types".to_string(), self.unique_types.to_string()),
            ("hapax_count".to_string(), self.hapax_count.to_string()),
            ("hapax_rate".to_string(), format!("{:.6}", self.hapax_rate)),
        ];
        for s in &self.strata {
            r.push((format!("stratum.{}.types", s.stratum.label), s.type_count.to_string()));
            r.push((
                format!("stratum.{}.occurrences", s.stratum.label),
                s.occurrences.to_string(),
            ));
        }
        if let Some(avg) = self.avg_word_length_graphemes {
            r.push(("avg_word_length_graphemes".to_string(), format!("{avg:.4}")));
        }
        r
    }
}

impl fmt::Display for CorpusStatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22}{:>14}", "Total word occurrences", self.total_occurrences)?;
        writeln!(f, "{:<22}{:>14}", "Unique words", self.unique_types)?;
        for s in &self.strata {
            let share = if self.unique_types == 0 {
                0.0
            } else {
                100.0 * s.type_count as f64 / self.unique_types as f64
            };
            writeln!(f, "{:<22}{:>14}  ({share:.1}%)", s.stratum.label, s.type_count)?;
        }
        writeln!(
            f,
            "{:<22}{:>14}  ({:.1}%)",
            "Hapax legomena",
            self.hapax_count,
            100.0 * self.hapax_rate
        )?;
        if let Some(avg) = self.avg_word_length_graphemes {
            writeln!(f, "{:<22}{:>14.2}", "Avg length (graphemes)", avg)?;
        }
        Ok(())
    }
}
