//! Surface-aligned root + affix decomposition.
//!
//! A cover of a word is `prefix* root suffix*` where every span is an exact
//! surface from the pack. Affix chain orders never decrease moving outward
//! from the root. Among all covers the analyzer returns the best under this
//! total order:
//!
//! 1. fewest tokens
//! 2. longest root span (in characters)
//! 3. a cover whose affix categories match a verb-chain template
//! 4. lowest sum of affix chain orders
//! 5. lexicographically smallest affix surface sequence (word order)

use std::cmp::Ordering;
use std::ops::Range;

use super::trie::SurfaceTrie;
use crate::pack::{AffixEntry, AffixPosition, LanguagePack, VerbChainTemplate};

/// One matched affix span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixSpan {
    pub span: Range<usize>,
    /// Index into the pack's affix list.
    pub affix: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Prefixes in word order.
    pub prefixes: Vec<AffixSpan>,
    pub root_span: Range<usize>,
    /// Index into the pack's root list.
    pub root: usize,
    /// Suffixes in word order.
    pub suffixes: Vec<AffixSpan>,
    /// Index of the matched verb-chain template, if any.
    pub verb_chain: Option<usize>,
}

impl Decomposition {
    pub fn token_count(&self) -> usize {
        self.prefixes.len() + 1 + self.suffixes.len()
    }

    pub fn affix_count(&self) -> usize {
        self.prefixes.len() + self.suffixes.len()
    }

    /// Spans in word order.
    pub fn spans(&self) -> Vec<Range<usize>> {
        self.prefixes
            .iter()
            .map(|a| a.span.clone())
            .chain(std::iter::once(self.root_span.clone()))
            .chain(self.suffixes.iter().map(|a| a.span.clone()))
            .collect()
    }

    pub fn surfaces<'a>(&self, word: &'a str) -> Vec<&'a str> {
        self.spans().into_iter().map(|r| &word[r]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SearchMode {
    /// Any cover, including a bare root.
    Any,
    /// Covers with at least one affix.
    WithAffix,
    /// Covers whose affix categories match a verb-chain template.
    ChainOnly,
}

/// Immutable index over a pack's roots and affixes.
#[derive(Debug, Clone)]
pub struct MorphAnalyzer {
    roots: SurfaceTrie,
    prefixes: SurfaceTrie,
    suffixes: SurfaceTrie,
    affixes: Vec<AffixEntry>,
    chains: Vec<VerbChainTemplate>,
    has_prefixes: bool,
}

struct Candidate {
    prefixes: Vec<AffixSpan>,
    root_span: Range<usize>,
    root: usize,
    root_chars: usize,
    suffixes: Vec<AffixSpan>,
    verb_chain: Option<usize>,
    order_sum: i64,
}

impl Candidate {
    fn tokens(&self) -> usize {
        self.prefixes.len() + 1 + self.suffixes.len()
    }
}

struct Search<'w> {
    word: &'w str,
    max_affixes: usize,
    mode: SearchMode,
    best: Option<Candidate>,
}

impl MorphAnalyzer {
    pub fn new(pack: &LanguagePack) -> Self {
        let mut roots = SurfaceTrie::new();
        for (i, root) in pack.roots.iter().enumerate() {
            for stem in &root.surface_stems {
                if !stem.is_empty() {
                    roots.insert(stem, i as u32);
                }
            }
        }
        let mut prefixes = SurfaceTrie::new();
        let mut suffixes = SurfaceTrie::new();
        let mut has_prefixes = false;
        for (i, affix) in pack.affixes.iter().enumerate() {
            if affix.surface.is_empty() {
                continue;
            }
            match affix.position {
                AffixPosition::Prefix => {
                    has_prefixes = true;
                    prefixes.insert(&affix.surface, i as u32)
                }
                AffixPosition::Suffix => suffixes.insert(&affix.surface, i as u32),
            }
        }
        MorphAnalyzer {
            roots,
            prefixes,
            suffixes,
            affixes: pack.affixes.clone(),
            chains: pack.verb_chains.clone(),
            has_prefixes,
        }
    }

    pub fn affix(&self, index: usize) -> &AffixEntry {
        &self.affixes[index]
    }

    /// Best cover of `word` with at most `max_affixes` affixes.
    pub fn decompose(&self, word: &str, max_affixes: usize) -> Option<Decomposition> {
        self.search(word, max_affixes, SearchMode::Any)
    }

    /// Best cover whose affix sequence matches a verb-chain template.
    pub fn match_verb_chain(&self, word: &str, max_affixes: usize) -> Option<Decomposition> {
        self.search(word, max_affixes, SearchMode::ChainOnly)
    }

    pub(crate) fn search(
        &self,
        word: &str,
        max_affixes: usize,
        mode: SearchMode,
    ) -> Option<Decomposition> {
        if word.is_empty() {
            return None;
        }
        if mode == SearchMode::ChainOnly && self.chains.is_empty() {
            return None;
        }
        let mut search = Search {
            word,
            max_affixes,
            mode,
            best: None,
        };
        let mut prefixes = Vec::new();
        self.walk_prefixes(&mut search, 0, i32::MAX, &mut prefixes);
        search.best.map(|c| Decomposition {
            prefixes: c.prefixes,
            root_span: c.root_span,
            root: c.root,
            suffixes: c.suffixes,
            verb_chain: c.verb_chain,
        })
    }

    fn walk_prefixes(
        &self,
        search: &mut Search<'_>,
        pos: usize,
        max_order: i32,
        prefixes: &mut Vec<AffixSpan>,
    ) {
        self.try_roots(search, pos, prefixes);
        if !self.has_prefixes || prefixes.len() >= search.max_affixes {
            return;
        }
        // prefix count + root + at least nothing more must stay within the bound
        if let Some(best) = &search.best {
            if prefixes.len() + 2 > best.tokens() {
                return;
            }
        }
        let mut matches = Vec::new();
        self.prefixes.for_each_prefix(search.word, pos, |end, ids| {
            matches.push((end, ids.to_vec()));
        });
        for (end, ids) in matches {
            if end >= search.word.len() {
                continue;
            }
            for id in ids {
                let order = self.affixes[id as usize].chain_order;
                // reading left to right, prefixes move toward the root
                if order > max_order {
                    continue;
                }
                prefixes.push(AffixSpan {
                    span: pos..end,
                    affix: id as usize,
                });
                self.walk_prefixes(search, end, order, prefixes);
                prefixes.pop();
            }
        }
    }

    fn try_roots(&self, search: &mut Search<'_>, pos: usize, prefixes: &[AffixSpan]) {
        let mut matches = Vec::new();
        self.roots.for_each_prefix(search.word, pos, |end, ids| {
            matches.push((end, ids[0] as usize));
        });
        // longest root first so ties on token count settle early
        for (end, root) in matches.into_iter().rev() {
            let mut suffixes = Vec::new();
            self.walk_suffixes(search, prefixes, pos..end, root, end, i32::MIN, &mut suffixes);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_suffixes(
        &self,
        search: &mut Search<'_>,
        prefixes: &[AffixSpan],
        root_span: Range<usize>,
        root: usize,
        pos: usize,
        min_order: i32,
        suffixes: &mut Vec<AffixSpan>,
    ) {
        let tokens_so_far = prefixes.len() + 1 + suffixes.len();
        if pos == search.word.len() {
            self.offer(search, prefixes, &root_span, root, suffixes);
            return;
        }
        if prefixes.len() + suffixes.len() >= search.max_affixes {
            return;
        }
        if let Some(best) = &search.best {
            if tokens_so_far + 1 > best.tokens() {
                return;
            }
        }
        let mut matches = Vec::new();
        self.suffixes.for_each_prefix(search.word, pos, |end, ids| {
            matches.push((end, ids.to_vec()));
        });
        for (end, ids) in matches.into_iter().rev() {
            for id in ids {
                let order = self.affixes[id as usize].chain_order;
                if order < min_order {
                    continue;
                }
                suffixes.push(AffixSpan {
                    span: pos..end,
                    affix: id as usize,
                });
                self.walk_suffixes(search, prefixes, root_span.clone(), root, end, order, suffixes);
                suffixes.pop();
            }
        }
    }

    fn offer(
        &self,
        search: &mut Search<'_>,
        prefixes: &[AffixSpan],
        root_span: &Range<usize>,
        root: usize,
        suffixes: &[AffixSpan],
    ) {
        let affix_count = prefixes.len() + suffixes.len();
        if search.mode == SearchMode::WithAffix && affix_count == 0 {
            return;
        }
        let verb_chain = self.chain_for(prefixes, suffixes);
        if search.mode == SearchMode::ChainOnly && verb_chain.is_none() {
            return;
        }
        let order_sum = prefixes
            .iter()
            .chain(suffixes)
            .map(|a| i64::from(self.affixes[a.affix].chain_order))
            .sum();
        let cand = Candidate {
            prefixes: prefixes.to_vec(),
            root_span: root_span.clone(),
            root,
            root_chars: search.word[root_span.clone()].chars().count(),
            suffixes: suffixes.to_vec(),
            verb_chain,
            order_sum,
        };
        let better = match &search.best {
            None => true,
            Some(best) => self.compare(search.word, &cand, best) == Ordering::Less,
        };
        if better {
            search.best = Some(cand);
        }
    }

    fn chain_for(&self, prefixes: &[AffixSpan], suffixes: &[AffixSpan]) -> Option<usize> {
        let n = prefixes.len() + suffixes.len();
        if n == 0 {
            return None;
        }
        self.chains.iter().position(|t| {
            t.sequence.len() == n
                && prefixes
                    .iter()
                    .chain(suffixes)
                    .zip(&t.sequence)
                    .all(|(a, slot)| slot.matches(&self.affixes[a.affix]))
        })
    }

    /// `Less` means `a` is the better cover.
    fn compare(&self, word: &str, a: &Candidate, b: &Candidate) -> Ordering {
        a.tokens()
            .cmp(&b.tokens())
            .then(b.root_chars.cmp(&a.root_chars))
            .then(b.verb_chain.is_some().cmp(&a.verb_chain.is_some()))
            .then(a.order_sum.cmp(&b.order_sum))
            .then_with(|| {
                let sa = a.prefixes.iter().chain(&a.suffixes).map(|s| &word[s.span.clone()]);
                let sb = b.prefixes.iter().chain(&b.suffixes).map(|s| &word[s.span.clone()]);
                sa.cmp(sb)
            })
    }
}
