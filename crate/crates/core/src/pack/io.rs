use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{
    AffixEntry, CategoryConstraint, LanguagePack, RootEntry, SyllablePattern, VerbChainTemplate,
};
use crate::error::{Error, Result};
use crate::normalize::Normalization;
use crate::script::{CharClass, ScriptTable};

/// Files a pack directory must contain, in the order they are checked.
pub const PACK_FILES: [&str; 6] = [
    "roots.tsv",
    "affixes.tsv",
    "verb_chains.tsv",
    "syllables.tsv",
    "script.tsv",
    "pack.meta",
];

struct Line<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

fn data_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some(Line {
                number: i + 1,
                fields: line.split('\t').collect(),
            })
        }
    })
}

fn expect_fields(file: &str, line: &Line<'_>, min: usize, max: usize) -> Result<()> {
    let n = line.fields.len();
    if n < min || n > max {
        let expected = if min == max {
            format!("{min}")
        } else {
            format!("{min}-{max}")
        };
        return Err(Error::malformed(
            file,
            line.number,
            format!("expected {expected} tab-separated columns, found {n}"),
        ));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(file: &str, line: usize, raw: &str, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.trim()
        .parse()
        .map_err(|e| Error::malformed(file, line, format!("bad {what} {raw:?}: {e}")))
}

fn read(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    String::from_utf8(bytes).map_err(|e| {
        let offset = e.utf8_error().valid_up_to();
        Error::malformed(name, 0, format!("invalid UTF-8 at byte offset {offset}"))
    })
}

fn parse_meta(text: &str) -> Result<(String, Normalization)> {
    let mut language_id = None;
    let mut normalization = Normalization::Nfc;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::malformed("pack.meta", i + 1, "expected key=value"))?;
        match key.trim() {
            "language_id" => language_id = Some(value.trim().to_string()),
            "normalization" => {
                normalization = value
                    .trim()
                    .parse()
                    .map_err(|e: String| Error::malformed("pack.meta", i + 1, e))?
            }
            other => {
                return Err(Error::malformed(
                    "pack.meta",
                    i + 1,
                    format!("unknown key {other:?}"),
                ))
            }
        }
    }
    let language_id =
        language_id.ok_or_else(|| Error::malformed("pack.meta", 0, "missing language_id"))?;
    Ok((language_id, normalization))
}

fn parse_roots(text: &str, norm: Normalization) -> Result<Vec<RootEntry>> {
    const FILE: &str = "roots.tsv";
    let mut roots = Vec::new();
    let mut seen: BTreeMap<(String, super::PartOfSpeech), usize> = BTreeMap::new();
    let mut dups = Vec::new();
    for line in data_lines(text) {
        expect_fields(FILE, &line, 3, 4)?;
        let lemma = norm.apply(line.fields[0].trim());
        let pos = parse_field(FILE, line.number, line.fields[1], "part of speech")?;
        let stems_raw = line.fields[2].trim();
        let surface_stems = if stems_raw.is_empty() {
            vec![lemma.clone()]
        } else {
            stems_raw.split(',').map(|s| norm.apply(s.trim())).collect()
        };
        let frequency_hint = match line.fields.get(3).map(|s| s.trim()) {
            None | Some("") => None,
            Some(raw) => Some(parse_field(FILE, line.number, raw, "frequency hint")?),
        };
        if let Some(first) = seen.insert((lemma.clone(), pos), line.number) {
            dups.push(format!(
                "{FILE}: root {lemma:?} ({}) at lines {first} and {}",
                pos.as_str(),
                line.number
            ));
        }
        roots.push(RootEntry {
            lemma,
            surface_stems,
            pos,
            frequency_hint,
        });
    }
    if !dups.is_empty() {
        return Err(Error::Duplicates(dups));
    }
    Ok(roots)
}

fn parse_affixes(text: &str, norm: Normalization) -> Result<Vec<AffixEntry>> {
    const FILE: &str = "affixes.tsv";
    let mut affixes = Vec::new();
    let mut seen = BTreeMap::new();
    let mut dups = Vec::new();
    for line in data_lines(text) {
        expect_fields(FILE, &line, 5, 5)?;
        let entry = AffixEntry {
            surface: norm.apply(line.fields[0].trim()),
            position: parse_field(FILE, line.number, line.fields[1], "position")?,
            category: parse_field(FILE, line.number, line.fields[2], "category")?,
            allomorph_group: line.fields[3].trim().to_string(),
            chain_order: parse_field(FILE, line.number, line.fields[4], "chain order")?,
        };
        let key = (
            entry.surface.clone(),
            entry.position,
            entry.category,
            entry.allomorph_group.clone(),
        );
        if let Some(first) = seen.insert(key, line.number) {
            dups.push(format!(
                "{FILE}: affix {:?} at lines {first} and {}",
                entry.surface, line.number
            ));
        }
        affixes.push(entry);
    }
    if !dups.is_empty() {
        return Err(Error::Duplicates(dups));
    }
    Ok(affixes)
}

fn parse_verb_chains(text: &str, norm: Normalization) -> Result<Vec<VerbChainTemplate>> {
    const FILE: &str = "verb_chains.tsv";
    let mut chains: Vec<VerbChainTemplate> = Vec::new();
    let mut seen = BTreeMap::new();
    let mut dups = Vec::new();
    for line in data_lines(text) {
        expect_fields(FILE, &line, 2, 3)?;
        let name = line.fields[0].trim().to_string();
        let sequence = line.fields[1]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_field::<CategoryConstraint>(FILE, line.number, s, "category"))
            .collect::<Result<Vec<_>>>()?;
        let example = line
            .fields
            .get(2)
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| norm.apply(s));
        if let Some(first) = seen.insert(name.clone(), line.number) {
            dups.push(format!(
                "{FILE}: chain {name:?} at lines {first} and {}",
                line.number
            ));
        }
        chains.push(VerbChainTemplate {
            name,
            sequence,
            example,
        });
    }
    if !dups.is_empty() {
        return Err(Error::Duplicates(dups));
    }
    Ok(chains)
}

fn parse_syllables(text: &str) -> Result<Vec<SyllablePattern>> {
    const FILE: &str = "syllables.tsv";
    let mut patterns = Vec::new();
    for line in data_lines(text) {
        expect_fields(FILE, &line, 2, 2)?;
        let priority = parse_field(FILE, line.number, line.fields[1], "priority")?;
        let pattern = SyllablePattern::parse(line.fields[0].trim(), priority)
            .map_err(|e| Error::malformed(FILE, line.number, e))?;
        patterns.push(pattern);
    }
    Ok(patterns)
}

fn parse_script(text: &str, norm: Normalization) -> Result<ScriptTable> {
    const FILE: &str = "script.tsv";
    let mut entries = Vec::new();
    let mut seen = BTreeMap::new();
    let mut dups = Vec::new();
    for line in data_lines(text) {
        expect_fields(FILE, &line, 2, 2)?;
        // Keys are taken verbatim: a key may itself be whitespace-adjacent.
        let key = norm.apply(line.fields[0]);
        if key.is_empty() {
            return Err(Error::malformed(FILE, line.number, "empty character key"));
        }
        let class: CharClass = parse_field(FILE, line.number, line.fields[1], "class")?;
        if let Some(first) = seen.insert(key.clone(), line.number) {
            dups.push(format!(
                "{FILE}: key {key:?} at lines {first} and {}",
                line.number
            ));
        }
        entries.push((key, class));
    }
    if !dups.is_empty() {
        return Err(Error::Duplicates(dups));
    }
    Ok(ScriptTable::new(entries))
}

/// Loads a pack directory. Entry order follows the files; every surface is
/// normalized to the pack's declared form.
pub fn load_language_pack(dir: impl AsRef<Path>) -> Result<LanguagePack> {
    let dir = dir.as_ref();
    for name in PACK_FILES {
        if !dir.join(name).is_file() {
            return Err(Error::PackIncomplete(name.to_string()));
        }
    }
    let (language_id, normalization) = parse_meta(&read(dir, "pack.meta")?)?;
    Ok(LanguagePack {
        language_id,
        roots: parse_roots(&read(dir, "roots.tsv")?, normalization)?,
        affixes: parse_affixes(&read(dir, "affixes.tsv")?, normalization)?,
        verb_chains: parse_verb_chains(&read(dir, "verb_chains.tsv")?, normalization)?,
        syllable_patterns: parse_syllables(&read(dir, "syllables.tsv")?)?,
        script: parse_script(&read(dir, "script.tsv")?, normalization)?,
        normalization,
    })
}

/// Writes `pack` in the directory layout read by [`load_language_pack`].
pub fn write_language_pack(pack: &LanguagePack, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut meta = String::new();
    writeln!(meta, "language_id={}", pack.language_id).unwrap();
    writeln!(meta, "normalization={}", pack.normalization).unwrap();

    let mut roots = String::from("# lemma\tpos\tstems\tfreq_hint\n");
    for r in &pack.roots {
        let hint = r.frequency_hint.map(|h| h.to_string()).unwrap_or_default();
        writeln!(
            roots,
            "{}\t{}\t{}\t{}",
            r.lemma,
            r.pos.as_str(),
            r.surface_stems.join(","),
            hint
        )
        .unwrap();
    }

    let mut affixes = String::from("# surface\tposition\tcategory\tallomorph_group\tchain_order\n");
    for a in &pack.affixes {
        writeln!(
            affixes,
            "{}\t{}\t{}\t{}\t{}",
            a.surface,
            a.position.as_str(),
            a.category,
            a.allomorph_group,
            a.chain_order
        )
        .unwrap();
    }

    let mut chains = String::from("# name\tsequence\texample\n");
    for c in &pack.verb_chains {
        let seq: Vec<String> = c.sequence.iter().map(|s| s.to_string()).collect();
        writeln!(
            chains,
            "{}\t{}\t{}",
            c.name,
            seq.join(","),
            c.example.as_deref().unwrap_or("")
        )
        .unwrap();
    }

    let mut syllables = String::from("# pattern\tpriority\n");
    for p in &pack.syllable_patterns {
        writeln!(syllables, "{}\t{}", p.pattern_string(), p.priority).unwrap();
    }

    let mut script = String::from("# char\tclass\n");
    for (key, class) in pack.script.entries() {
        writeln!(script, "{key}\t{class}").unwrap();
    }

    for (name, body) in [
        ("pack.meta", meta),
        ("roots.tsv", roots),
        ("affixes.tsv", affixes),
        ("verb_chains.tsv", chains),
        ("syllables.tsv", syllables),
        ("script.tsv", script),
    ] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
