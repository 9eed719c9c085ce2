use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use super::CorpusCounts;
use crate::error::{Error, Result};

/// Types with frequency ≥ `min_freq`, most frequent first, then lexicographic.
pub fn build_eval_set(counts: &CorpusCounts, min_freq: u64) -> Vec<String> {
    counts
        .ranked()
        .into_iter()
        .take_while(|(_, n)| *n >= min_freq.max(1))
        .map(|(w, _)| w.to_string())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedSample {
    pub common: Vec<String>,
    pub medium: Vec<String>,
    pub rare: Vec<String>,
}

impl StratifiedSample {
    /// Common, then medium, then rare.
    pub fn all(&self) -> Vec<String> {
        let mut v = self.common.clone();
        v.extend(self.medium.iter().cloned());
        v.extend(self.rare.iter().cloned());
        v
    }

    pub fn strata(&self) -> [(&'static str, &[String]); 3] {
        [
            ("common", &self.common),
            ("medium", &self.medium),
            ("rare", &self.rare),
        ]
    }
}

/// Three disjoint strata of `per_stratum` types each:
///
/// * common: the most frequent types;
/// * medium: a window around the median rank of types with frequency ≥ 2,
///   skipping types already taken as common;
/// * rare: a seeded uniform sample from the inclusive `rare_band`,
///   excluding types already taken.
pub fn stratified_sample(
    counts: &CorpusCounts,
    per_stratum: usize,
    rare_band: (u64, u64),
    seed: u64,
) -> Result<StratifiedSample> {
    let ranked = counts.ranked();
    let short = |stratum: &str, available: usize| Error::InsufficientTypes {
        stratum: stratum.to_string(),
        needed: per_stratum,
        available,
    };

    if ranked.len() < per_stratum {
        return Err(short("common", ranked.len()));
    }
    let common: Vec<&str> = ranked[..per_stratum].iter().map(|(w, _)| *w).collect();
    let mut taken: FxHashSet<&str> = common.iter().copied().collect();

    let repeated: Vec<&str> = ranked
        .iter()
        .take_while(|(_, n)| *n >= 2)
        .map(|(w, _)| *w)
        .collect();
    let start = (repeated.len() / 2).saturating_sub(per_stratum / 2);
    let medium: Vec<&str> = repeated[start..]
        .iter()
        .copied()
        .filter(|w| !taken.contains(w))
        .take(per_stratum)
        .collect();
    if medium.len() < per_stratum {
        return Err(short("medium", medium.len()));
    }
    taken.extend(medium.iter().copied());

    let (lo, hi) = rare_band;
    let band: Vec<&str> = ranked
        .iter()
        .filter(|(w, n)| *n >= lo && *n <= hi && !taken.contains(w))
        .map(|(w, _)| *w)
        .collect();
    if band.len() < per_stratum {
        return Err(short("rare", band.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, band.len(), per_stratum).into_vec();
    picked.sort_unstable();
    let rare = picked.into_iter().map(|i| band[i]).collect::<Vec<_>>();

    let own = |v: Vec<&str>| v.into_iter().map(str::to_string).collect();
    Ok(StratifiedSample {
        common: own(common),
        medium: own(medium),
        rare: own(rare),
    })
}
