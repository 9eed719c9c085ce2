use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{AffixCategory, AffixPosition, LanguagePack};
use crate::script::SyllableSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    EmptyLanguageId,
    RootMissingLemmaStem,
    EmptySurface,
    DuplicateRoot,
    NegativeChainOrder,
    InconsistentAllomorphGroup,
    EmptyVerbChain,
    UnknownAllomorphGroup,
    BadSyllablePattern,
    UnclassifiedCharacter,
    NotNormalized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn summary(&self, limit: usize) -> String {
        let mut parts: Vec<String> = self
            .violations
            .iter()
            .take(limit)
            .map(|v| v.to_string())
            .collect();
        if self.violations.len() > limit {
            parts.push(format!("... {} more", self.violations.len() - limit));
        }
        parts.join("; ")
    }

    fn push(&mut self, kind: ViolationKind, message: String) {
        self.violations.push(Violation { kind, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a pack. Violations are reported,
/// never raised; an empty report means the pack is usable.
pub fn validate_pack(pack: &LanguagePack) -> ValidationReport {
    let mut report = ValidationReport::default();
    let norm = pack.normalization;

    if pack.language_id.trim().is_empty() {
        report.push(ViolationKind::EmptyLanguageId, "language_id is empty".into());
    }

    let mut seen_roots = BTreeMap::new();
    for (i, root) in pack.roots.iter().enumerate() {
        if !root.surface_stems.iter().any(|s| *s == root.lemma) {
            report.push(
                ViolationKind::RootMissingLemmaStem,
                format!("root {:?}: surface stems do not include the lemma", root.lemma),
            );
        }
        if root.lemma.is_empty() || root.surface_stems.iter().any(|s| s.is_empty()) {
            report.push(
                ViolationKind::EmptySurface,
                format!("root #{i} {:?}: empty lemma or stem", root.lemma),
            );
        }
        if let Some(first) = seen_roots.insert((root.lemma.clone(), root.pos), i) {
            report.push(
                ViolationKind::DuplicateRoot,
                format!(
                    "root {:?} ({}) listed at #{first} and #{i}",
                    root.lemma,
                    root.pos.as_str()
                ),
            );
        }
        for text in std::iter::once(&root.lemma).chain(&root.surface_stems) {
            if !norm.is_normalized(text) {
                report.push(
                    ViolationKind::NotNormalized,
                    format!("root surface {text:?} is not {norm}"),
                );
            }
        }
        for stem in &root.surface_stems {
            check_classified(pack, stem, "root stem", &mut report);
        }
    }

    let mut groups: BTreeMap<&str, BTreeSet<(AffixPosition, AffixCategory)>> = BTreeMap::new();
    for affix in &pack.affixes {
        if affix.surface.is_empty() {
            report.push(
                ViolationKind::EmptySurface,
                format!("affix in group {:?} has an empty surface", affix.allomorph_group),
            );
        }
        if affix.chain_order < 0 {
            report.push(
                ViolationKind::NegativeChainOrder,
                format!("affix {:?} has chain_order {}", affix.surface, affix.chain_order),
            );
        }
        if !norm.is_normalized(&affix.surface) {
            report.push(
                ViolationKind::NotNormalized,
                format!("affix surface {:?} is not {norm}", affix.surface),
            );
        }
        check_classified(pack, &affix.surface, "affix", &mut report);
        groups
            .entry(affix.allomorph_group.as_str())
            .or_default()
            .insert((affix.position, affix.category));
    }
    for (group, kinds) in &groups {
        if kinds.len() > 1 {
            let listed: Vec<String> = kinds
                .iter()
                .map(|(p, c)| format!("{}/{}", p.as_str(), c))
                .collect();
            report.push(
                ViolationKind::InconsistentAllomorphGroup,
                format!("allomorph group {group:?} mixes {}", listed.join(", ")),
            );
        }
    }

    for chain in &pack.verb_chains {
        if chain.sequence.is_empty() {
            report.push(
                ViolationKind::EmptyVerbChain,
                format!("verb chain {:?} has an empty sequence", chain.name),
            );
        }
        for slot in &chain.sequence {
            if let Some(g) = &slot.group {
                if !groups.contains_key(g.as_str()) {
                    report.push(
                        ViolationKind::UnknownAllomorphGroup,
                        format!("verb chain {:?} references unknown group {g:?}", chain.name),
                    );
                }
            }
        }
    }

    for pattern in &pack.syllable_patterns {
        let p = &pattern.pattern;
        let nucleus = p
            .iter()
            .any(|s| matches!(s, SyllableSymbol::V | SyllableSymbol::M));
        let lone_c = p.len() == 1 && p[0] == SyllableSymbol::C;
        if p.is_empty() || !(nucleus || lone_c) {
            report.push(
                ViolationKind::BadSyllablePattern,
                format!("syllable pattern {:?} has no nucleus", pattern.pattern_string()),
            );
        }
    }

    for (key, _) in pack.script.entries() {
        if !norm.is_normalized(key) {
            report.push(
                ViolationKind::NotNormalized,
                format!("script key {key:?} is not {norm}"),
            );
        }
    }

    report
}

fn check_classified(pack: &LanguagePack, surface: &str, what: &str, report: &mut ValidationReport) {
    let missing: BTreeSet<&str> = pack
        .script
        .units(surface)
        .into_iter()
        .filter(|u| u.class.is_none())
        .map(|u| &surface[u.span])
        .collect();
    if !missing.is_empty() {
        report.push(
            ViolationKind::UnclassifiedCharacter,
            format!("{what} {surface:?} has unclassified characters {missing:?}"),
        );
    }
}
