use std::collections::HashSet;
use std::ops::Range;

use super::{Token, TokenCategory};
use crate::error::{Error, Result};
use crate::pack::SyllablePattern;
use crate::script::ScriptTable;

/// Sorts patterns into matching order: priority descending, then longer
/// patterns first, then source order.
pub(crate) fn matching_order(patterns: &[SyllablePattern]) -> Vec<SyllablePattern> {
    let mut sorted: Vec<(usize, SyllablePattern)> = patterns.iter().cloned().enumerate().collect();
    sorted.sort_by(|(ia, a), (ib, b)| {
        b.priority
            .cmp(&a.priority)
            .then(b.pattern.len().cmp(&a.pattern.len()))
            .then(ia.cmp(ib))
    });
    sorted.into_iter().map(|(_, p)| p).collect()
}

/// Greedy left-to-right syllabification. At each position the first pattern
/// (in `ordered` order) whose symbols match the next units and which ends on
/// a grapheme boundary is taken.
pub fn syllabify_with(
    script: &ScriptTable,
    ordered: &[SyllablePattern],
    word: &str,
) -> Result<Vec<Range<usize>>> {
    let units = script.units(word);
    let mut symbols = Vec::with_capacity(units.len());
    for u in &units {
        match u.class.and_then(|c| c.symbol()) {
            Some(s) => symbols.push(s),
            None => return Err(Error::Unsyllabifiable(word[u.span.clone()].to_string())),
        }
    }
    let boundaries: HashSet<usize> = script.clusters(word).into_iter().map(|r| r.end).collect();

    let mut out = Vec::new();
    let mut i = 0;
    while i < units.len() {
        let taken = ordered.iter().find_map(|p| {
            let n = p.pattern.len();
            if n == 0 || i + n > units.len() {
                return None;
            }
            if symbols[i..i + n] != p.pattern[..] {
                return None;
            }
            let end = units[i + n - 1].span.end;
            boundaries.contains(&end).then_some(n)
        });
        match taken {
            Some(n) => {
                out.push(units[i].span.start..units[i + n - 1].span.end);
                i += n;
            }
            None => return Err(Error::Unsyllabifiable(word[units[i].span.start..].to_string())),
        }
    }
    Ok(out)
}

/// Tier-3 split into grapheme clusters.
pub fn grapheme_split(word: &str, script: &ScriptTable) -> Vec<Token> {
    script
        .clusters(word)
        .into_iter()
        .enumerate()
        .map(|(i, r)| Token::new(&word[r], 3, TokenCategory::Grapheme, i == 0))
        .collect()
}
