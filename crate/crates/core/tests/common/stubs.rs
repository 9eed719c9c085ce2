use std::time::{Duration, Instant};

use morphotok::eval::{evaluate, AdapterOutput, EvalOptions, FertilityReport, TokenizerAdapter};
use morphotok::Result;

/// Emits a fixed number of tokens per word: words of two characters split
/// in two, everything else stays whole.
pub struct TotalsStub;

impl TokenizerAdapter for TotalsStub {
    fn label(&self) -> String {
        "stub".into()
    }

    fn tokenize(&self, word: &str) -> Result<AdapterOutput> {
        let chars: Vec<String> = word.chars().map(String::from).collect();
        Ok(AdapterOutput::new(if chars.len() == 2 {
            chars
        } else {
            vec![word.to_string()]
        }))
    }
}

/// Word list of `words` entries for which [`TotalsStub`] emits `tokens`.
pub fn totals_words(words: usize, tokens: usize) -> Vec<&'static str> {
    let split = tokens - words;
    (0..words).map(|i| if i < split { "ab" } else { "c" }).collect()
}

pub fn stub_report(words: usize, tokens: usize) -> FertilityReport {
    evaluate(&TotalsStub, &totals_words(words, tokens), &EvalOptions::default()).unwrap()
}

/// Spends a fixed wall-clock time per word.
pub struct PacedStub(pub Duration);

impl TokenizerAdapter for PacedStub {
    fn label(&self) -> String {
        "paced".into()
    }

    fn tokenize(&self, word: &str) -> Result<AdapterOutput> {
        Ok(AdapterOutput::new(vec![word.to_string()]))
    }

    fn tokenize_batch(&self, words: &[&str]) -> Result<Vec<AdapterOutput>> {
        let deadline = Instant::now() + self.0 * words.len() as u32;
        while Instant::now() < deadline {
            std::hint::spin_loop();
        }
        words.iter().map(|w| self.tokenize(w)).collect()
    }
}

