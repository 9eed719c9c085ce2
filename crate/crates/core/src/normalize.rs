//! Unicode normalization applied once at text entry.

use std::fmt;
use std::str::FromStr;

use unicode_normalization::{is_nfc, is_nfd, is_nfkc, UnicodeNormalization};

/// Normalization form declared by a language pack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    #[default]
    Nfc,
    Nfd,
    Nfkc,
    None,
}

impl Normalization {
    pub fn apply(self, text: &str) -> String {
        match self {
            Normalization::Nfc => {
                if is_nfc(text) {
                    text.to_string()
                } else {
                    text.nfc().collect()
                }
            }
            Normalization::Nfd => {
                if is_nfd(text) {
                    text.to_string()
                } else {
                    text.nfd().collect()
                }
            }
            Normalization::Nfkc => {
                if is_nfkc(text) {
                    text.to_string()
                } else {
                    text.nfkc().collect()
                }
            }
            Normalization::None => text.to_string(),
        }
    }

    pub fn is_normalized(self, text: &str) -> bool {
        match self {
            Normalization::Nfc => is_nfc(text),
            Normalization::Nfd => is_nfd(text),
            Normalization::Nfkc => is_nfkc(text),
            Normalization::None => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Nfc => "NFC",
            Normalization::Nfd => "NFD",
            Normalization::Nfkc => "NFKC",
            Normalization::None => "none",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NFC" => Ok(Normalization::Nfc),
            "NFD" => Ok(Normalization::Nfd),
            "NFKC" => Ok(Normalization::Nfkc),
            "none" => Ok(Normalization::None),
            other => Err(format!("unknown normalization form {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nfc_composes_tamil_two_part_vowel_sign() {
        // கொ written as KA + E sign + AA sign composes to KA + O sign.
        let decomposed = "\u{0B95}\u{0BC6}\u{0BBE}";
        let composed = Normalization::Nfc.apply(decomposed);
        assert_eq!(composed, "\u{0B95}\u{0BCA}");
        assert!(Normalization::Nfc.is_normalized(&composed));
        assert_eq!(Normalization::Nfc.apply(&composed), composed);
    }

    #[test]
    fn parse_roundtrip() {
        for form in [
            Normalization::Nfc,
            Normalization::Nfd,
            Normalization::Nfkc,
            Normalization::None,
        ] {
            assert_eq!(form.as_str().parse::<Normalization>().unwrap(), form);
        }
        assert!("nfc".parse::<Normalization>().is_err());
    }
}
