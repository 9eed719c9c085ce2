//! Line formats for `tokenize` output and `detokenize` input.
//!
//! Plain lines hold escaped surfaces separated by one space. Annotated lines
//! hold `surface/T<tier>/<category>` fields separated by two spaces. Space,
//! tab, carriage return and backslash are escaped as `\s`, `\t`, `\r`, `\\`.

use morphotok::{Piece, TokenCategory};

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            ' ' => out.push_str("\\s"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\n' => out.push_str("\\n"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next()? {
            's' => out.push(' '),
            't' => out.push('\t'),
            'r' => out.push('\r'),
            'n' => out.push('\n'),
            '\\' => out.push('\\'),
            _ => return None,
        }
    }
    Some(out)
}

pub fn format_pieces(pieces: &[Piece], annotate: bool) -> String {
    let mut fields = Vec::new();
    for piece in pieces {
        for t in piece.tokens() {
            if annotate {
                fields.push(format!("{}/T{}/{}", escape(&t.surface), t.tier, t.category));
            } else {
                fields.push(escape(&t.surface));
            }
        }
    }
    fields.join(if annotate { "  " } else { " " })
}

fn parse_annotated_field(field: &str) -> Option<&str> {
    let mut parts = field.rsplitn(3, '/');
    let category = parts.next()?;
    let tier = parts.next()?;
    let surface = parts.next()?;
    category.parse::<TokenCategory>().ok()?;
    let digits = tier.strip_prefix('T')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || surface.is_empty() {
        return None;
    }
    Some(surface)
}

/// Rebuilds the text of one tokenized line. Annotated lines are detected
/// by their field shape.
pub fn join_line(line: &str) -> Option<String> {
    if line.is_empty() {
        return Some(String::new());
    }
    let annotated: Option<Vec<&str>> = line.split("  ").map(parse_annotated_field).collect();
    let surfaces: Vec<&str> = match annotated {
        Some(s) => s,
        None => line.split(' ').collect(),
    };
    let mut out = String::new();
    for s in surfaces {
        out.push_str(&unescape(s)?);
    }
    Some(out)
}
