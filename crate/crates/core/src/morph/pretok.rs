//! Whitespace/punctuation/digit pre-tokenization.

use std::ops::Range;

use unicode_general_category::{get_general_category, GeneralCategory as G};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Word,
    Whitespace,
    Punctuation,
    Number,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPiece {
    pub kind: PieceKind,
    pub span: Range<usize>,
}

fn kind_of(c: char) -> PieceKind {
    if c.is_whitespace() {
        return PieceKind::Whitespace;
    }
    if c.is_numeric() {
        return PieceKind::Number;
    }
    match get_general_category(c) {
        G::ConnectorPunctuation
        | G::DashPunctuation
        | G::OpenPunctuation
        | G::ClosePunctuation
        | G::InitialPunctuation
        | G::FinalPunctuation
        | G::OtherPunctuation
        | G::MathSymbol
        | G::CurrencySymbol
        | G::ModifierSymbol
        | G::OtherSymbol => PieceKind::Punctuation,
        _ => PieceKind::Word,
    }
}

/// Splits `text` into maximal runs of one kind. Spans tile the input.
pub fn pretokenize(text: &str) -> Vec<RawPiece> {
    let mut out: Vec<RawPiece> = Vec::new();
    for (i, c) in text.char_indices() {
        let kind = kind_of(c);
        let end = i + c.len_utf8();
        match out.last_mut() {
            Some(last) if last.kind == kind => last.span.end = end,
            _ => out.push(RawPiece { kind, span: i..end }),
        }
    }
    out
}

/// Word pieces of `text` (whitespace, punctuation and digit runs dropped).
pub(crate) fn words(text: &str) -> impl Iterator<Item = &str> {
    pretokenize(text)
        .into_iter()
        .filter(|p| p.kind == PieceKind::Word)
        .map(move |p| &text[p.span])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(PieceKind, &str)> {
        pretokenize(text)
            .into_iter()
            .map(|p| (p.kind, &text[p.span]))
            .collect()
    }

    #[test]
    fn splits_runs() {
        use PieceKind::*;
        assert_eq!(
            kinds("ev evlerinden."),
            vec![(Word, "ev"), (Whitespace, " "), (Word, "evlerinden"), (Punctuation, ".")]
        );
        assert_eq!(kinds("123"), vec![(Number, "123")]);
        assert_eq!(
            kinds("a1b  ?!"),
            vec![
                (Word, "a"),
                (Number, "1"),
                (Word, "b"),
                (Whitespace, "  "),
                (Punctuation, "?!")
            ]
        );
        assert!(kinds("").is_empty());
    }

    #[test]
    fn tamil_signs_stay_in_words() {
        let text = "வீட்டில், ௧௨";
        let k = kinds(text);
        assert_eq!(k[0], (PieceKind::Word, "வீட்டில்"));
        assert_eq!(k[1], (PieceKind::Punctuation, ","));
        assert_eq!(k[3], (PieceKind::Number, "௧௨"));
    }

    #[test]
    fn spans_tile_input() {
        let text = "x\u{301} — 42%\tfoo\n";
        let joined: String = pretokenize(text).iter().map(|p| &text[p.span.clone()]).collect();
        assert_eq!(joined, text);
    }
}
