use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};

use crate::bpe::BpeModel;
use crate::error::{Error, Result};
use crate::morph::Tokenizer;

/// One word's tokenization as seen by the harness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdapterOutput {
    pub tokens: Vec<String>,
    /// Highest tier used, for tokenizers that have tiers.
    pub tier: Option<u8>,
}

impl AdapterOutput {
    pub fn new(tokens: Vec<String>) -> Self {
        AdapterOutput { tokens, tier: None }
    }
}

/// Word in, tokens out. Implementations must be safe to call from several
/// evaluation threads at once.
pub trait TokenizerAdapter: Sync {
    fn label(&self) -> String;

    fn vocab_size(&self) -> Option<usize> {
        None
    }

    fn tokenize(&self, word: &str) -> Result<AdapterOutput>;

    fn tokenize_batch(&self, words: &[&str]) -> Result<Vec<AdapterOutput>> {
        words.iter().map(|w| self.tokenize(w)).collect()
    }
}

pub struct MorphoAdapter<'a> {
    tokenizer: &'a Tokenizer,
    label: String,
}

impl<'a> MorphoAdapter<'a> {
    pub fn new(tokenizer: &'a Tokenizer) -> Self {
        MorphoAdapter {
            tokenizer,
            label: format!("morpho:{}", tokenizer.pack().language_id),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl TokenizerAdapter for MorphoAdapter<'_> {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn vocab_size(&self) -> Option<usize> {
        Some(self.tokenizer.vocab().len())
    }

    fn tokenize(&self, word: &str) -> Result<AdapterOutput> {
        let seg = self.tokenizer.tokenize_word(word)?;
        Ok(AdapterOutput {
            tokens: seg.tokens.into_iter().map(|t| t.surface).collect(),
            tier: Some(seg.tier_used),
        })
    }
}

pub struct BpeAdapter<'a> {
    model: &'a BpeModel,
    label: String,
}

impl<'a> BpeAdapter<'a> {
    pub fn new(model: &'a BpeModel) -> Self {
        BpeAdapter {
            model,
            label: format!("bpe:{}", model.vocab_size()),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl TokenizerAdapter for BpeAdapter<'_> {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn vocab_size(&self) -> Option<usize> {
        Some(self.model.vocab_size())
    }

    fn tokenize(&self, word: &str) -> Result<AdapterOutput> {
        Ok(AdapterOutput::new(self.model.tokenize(word)))
    }
}

/// A third-party tokenizer run as `sh -c <command>`: one word per stdin
/// line, one line of tab-separated tokens per word on stdout.
pub struct ExternAdapter {
    command: String,
}

impl ExternAdapter {
    pub fn new(command: impl Into<String>) -> Self {
        ExternAdapter {
            command: command.into(),
        }
    }
}

impl TokenizerAdapter for ExternAdapter {
    fn label(&self) -> String {
        format!("extern:{}", self.command)
    }

    fn tokenize(&self, word: &str) -> Result<AdapterOutput> {
        let mut out = self.tokenize_batch(&[word])?;
        Ok(out.pop().expect("one line per word"))
    }

    fn tokenize_batch(&self, words: &[&str]) -> Result<Vec<AdapterOutput>> {
        if let Some(w) = words.iter().find(|w| w.contains(['\n', '\r'])) {
            return Err(Error::External(format!("word {w:?} contains a line break")));
        }
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::External(format!("cannot start {:?}: {e}", self.command)))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");

        let lines = std::thread::scope(|scope| {
            let writer = scope.spawn(move || -> std::io::Result<()> {
                let mut buf = std::io::BufWriter::new(&mut stdin);
                for w in words {
                    buf.write_all(w.as_bytes())?;
                    buf.write_all(b"\n")?;
                }
                buf.flush()
            });
            let lines: std::io::Result<Vec<String>> = BufReader::new(stdout).lines().collect();
            let wrote = writer.join().expect("writer thread panicked");
            lines.and_then(|l| wrote.map(|_| l))
        });
        let status = child
            .wait()
            .map_err(|e| Error::External(format!("waiting for {:?}: {e}", self.command)))?;
        let lines = lines.map_err(|e| Error::External(format!("{:?}: {e}", self.command)))?;
        if !status.success() {
            return Err(Error::External(format!("{:?} exited with {status}", self.command)));
        }
        if lines.len() != words.len() {
            return Err(Error::External(format!(
                "{:?} returned {} lines for {} words",
                self.command,
                lines.len(),
                words.len()
            )));
        }
        Ok(lines
            .into_iter()
            .map(|l| {
                AdapterOutput::new(
                    l.split('\t')
                        .filter(|t| !t.is_empty())
                        .map(str::to_string)
                        .collect(),
                )
            })
            .collect())
    }
}
