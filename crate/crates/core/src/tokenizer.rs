//! BPE subword model loading, encoding, and fertility measurement.
//!
//! The model format is the common interchange serialization: a JSON file
//! carrying a `vocab` map, an ordered `merges` list and flags. Both a compact
//! flat layout and the full `{"model": {...}}` tokenizer layout are accepted,
//! so an exported Llama-2-style tokenizer file loads directly.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::num::Real;

/// Default word-boundary symbol (U+2581 LOWER ONE EIGHTH BLOCK).
pub const DEFAULT_WORD_MARKER: char = '\u{2581}';

#[derive(Debug, Error)]
pub enum TokenizerError {
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("symbol `{0}` is not in the vocabulary and byte fallback is disabled")]
    NoFallback(String),
    #[error("corpus contains no words")]
    EmptyCorpus,
    #[error("token id {0} is not in the vocabulary")]
    UnknownId(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A byte-pair-encoding subword model with ranked merges.
#[derive(Debug, Clone)]
pub struct BpeModel {
    vocab: HashMap<String, u32>,
    ids: HashMap<u32, String>,
    merges: HashMap<(String, String), usize>,
    merge_count: usize,
    byte_fallback: bool,
    word_marker: char,
    add_prefix_marker: bool,
}

#[derive(Deserialize)]
struct FlatModelFile {
    vocab: HashMap<String, u32>,
    merges: Vec<serde_json::Value>,
    #[serde(default = "default_true")]
    byte_fallback: bool,
    #[serde(default)]
    word_marker: Option<char>,
    #[serde(default = "default_true")]
    add_prefix_marker: bool,
}

#[derive(Deserialize)]
struct NestedModelFile {
    model: FlatModelFile,
}

fn default_true() -> bool {
    true
}

impl BpeModel {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, TokenizerError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Parse from JSON, accepting either the flat layout or the nested
    /// `{"model": {"vocab": ..., "merges": ...}}` tokenizer layout. Merges
    /// are either `"left right"` strings or `["left", "right"]` pairs.
    pub fn from_json(text: &str) -> Result<Self, TokenizerError> {
        let flat: FlatModelFile = match serde_json::from_str::<NestedModelFile>(text) {
            Ok(nested) => nested.model,
            Err(_) => serde_json::from_str(text)?,
        };
        let mut merges = Vec::with_capacity(flat.merges.len());
        for (i, m) in flat.merges.iter().enumerate() {
            let pair = match m {
                serde_json::Value::String(s) => {
                    let (l, r) = s.split_once(' ').ok_or_else(|| {
                        TokenizerError::MalformedModel(format!(
                            "merge {i} `{s}` is not `left right`"
                        ))
                    })?;
                    (l.to_string(), r.to_string())
                }
                serde_json::Value::Array(a) if a.len() == 2 => {
                    match (a[0].as_str(), a[1].as_str()) {
                        (Some(l), Some(r)) => (l.to_string(), r.to_string()),
                        _ => {
                            return Err(TokenizerError::MalformedModel(format!(
                                "merge {i} is not a pair of strings"
                            )))
                        }
                    }
                }
                _ => {
                    return Err(TokenizerError::MalformedModel(format!(
                        "merge {i} has an unsupported shape"
                    )))
                }
            };
            merges.push(pair);
        }
        Self::new(
            flat.vocab,
            merges,
            flat.byte_fallback,
            flat.word_marker.unwrap_or(DEFAULT_WORD_MARKER),
            flat.add_prefix_marker,
        )
    }

    pub fn new(
        vocab: HashMap<String, u32>,
        merges: Vec<(String, String)>,
        byte_fallback: bool,
        word_marker: char,
        add_prefix_marker: bool,
    ) -> Result<Self, TokenizerError> {
        for (left, right) in &merges {
            let joined = format!("{left}{right}");
            if !vocab.contains_key(&joined) {
                return Err(TokenizerError::MalformedModel(format!(
                    "merge `{left}`+`{right}` concatenates to `{joined}` which is not in vocab"
                )));
            }
        }
        if byte_fallback {
            for byte in 0..=255u8 {
                let token = byte_token(byte);
                if !vocab.contains_key(&token) {
                    return Err(TokenizerError::MalformedModel(format!(
                        "byte fallback enabled but `{token}` is not in vocab"
                    )));
                }
            }
        }
        let mut ids = HashMap::with_capacity(vocab.len());
        for (token, &id) in &vocab {
            if ids.insert(id, token.clone()).is_some() {
                return Err(TokenizerError::MalformedModel(format!("duplicate token id {id}")));
            }
        }
        let merge_count = merges.len();
        let ranks = merges.into_iter().enumerate().map(|(rank, pair)| (pair, rank)).collect();
        Ok(Self {
            vocab,
            ids,
            merges: ranks,
            merge_count,
            byte_fallback,
            word_marker,
            add_prefix_marker,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn merge_count(&self) -> usize {
        self.merge_count
    }

    pub fn word_marker(&self) -> char {
        self.word_marker
    }

    pub fn token_id(&self, token: &str) -> Option<u32> {
        self.vocab.get(token).copied()
    }

    pub fn token_text(&self, id: u32) -> Option<&str> {
        self.ids.get(&id).map(String::as_str)
    }

    /// Encode text to token ids: NFC-normalize, map whitespace to the word
    /// marker (plus one leading marker when configured), split to single
    /// characters, then repeatedly apply the lowest-ranked applicable merge
    /// (leftmost among equals). Symbols still missing from the vocabulary
    /// re-expand into per-byte fallback tokens.
    pub fn encode(&self, text: &str) -> Result<Vec<u32>, TokenizerError> {
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let normalized: String = text.nfc().collect();
        let mut symbols: Vec<String> = Vec::with_capacity(normalized.len() + 1);
        if self.add_prefix_marker {
            symbols.push(self.word_marker.to_string());
        }
        for c in normalized.chars() {
            if c.is_whitespace() {
                symbols.push(self.word_marker.to_string());
            } else {
                symbols.push(c.to_string());
            }
        }

        loop {
            let mut best: Option<(usize, usize)> = None; // (rank, index)
            for i in 0..symbols.len().saturating_sub(1) {
                let pair = (symbols[i].clone(), symbols[i + 1].clone());
                if let Some(&rank) = self.merges.get(&pair) {
                    if best.map_or(true, |(r, _)| rank < r) {
                        best = Some((rank, i));
                    }
                }
            }
            match best {
                Some((_, i)) => {
                    let merged = format!("{}{}", symbols[i], symbols[i + 1]);
                    symbols[i] = merged;
                    symbols.remove(i + 1);
                }
                None => break,
            }
        }

        let mut out = Vec::with_capacity(symbols.len());
        for symbol in &symbols {
            match self.vocab.get(symbol) {
                Some(&id) => out.push(id),
                None => {
                    if !self.byte_fallback {
                        return Err(TokenizerError::NoFallback(symbol.clone()));
                    }
                    for byte in symbol.bytes() {
                        out.push(
                            self.token_id(&byte_token(byte))
                                .expect("byte fallback table checked at load"),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Serialize into the compact flat JSON layout, merges in rank order.
    pub fn to_compact_json(&self) -> Result<String, TokenizerError> {
        let mut merges: Vec<(&(String, String), &usize)> = self.merges.iter().collect();
        merges.sort_by_key(|(_, &rank)| rank);
        let merges: Vec<String> =
            merges.into_iter().map(|((l, r), _)| format!("{l} {r}")).collect();
        let mut vocab: Vec<(&String, &u32)> = self.vocab.iter().collect();
        vocab.sort_by_key(|&(_, id)| id);
        let vocab: serde_json::Map<String, serde_json::Value> = vocab
            .into_iter()
            .map(|(t, &id)| (t.clone(), serde_json::Value::from(id)))
            .collect();
        let value = serde_json::json!({
            "vocab": vocab,
            "merges": merges,
            "byte_fallback": self.byte_fallback,
            "word_marker": self.word_marker,
            "add_prefix_marker": self.add_prefix_marker,
        });
        Ok(serde_json::to_string_pretty(&value)?)
    }

    /// Inverse of `encode` for verification: byte-fallback runs decode back
    /// to UTF-8, markers become spaces, one leading marker is stripped when
    /// the prefix marker is configured.
    pub fn decode(&self, ids: &[u32]) -> Result<String, TokenizerError> {
        let mut text = String::new();
        let mut bytes: Vec<u8> = Vec::new();
        for &id in ids {
            let token = self.token_text(id).ok_or(TokenizerError::UnknownId(id))?;
            match parse_byte_token(token) {
                Some(b) => bytes.push(b),
                None => {
                    if !bytes.is_empty() {
                        text.push_str(&String::from_utf8_lossy(&bytes));
                        bytes.clear();
                    }
                    text.push_str(token);
                }
            }
        }
        if !bytes.is_empty() {
            text.push_str(&String::from_utf8_lossy(&bytes));
        }
        let mut text = text.replace(self.word_marker, " ");
        if self.add_prefix_marker && text.starts_with(' ') {
            text.remove(0);
        }
        Ok(text)
    }
}

pub(crate) fn byte_token(byte: u8) -> String {
    format!("<0x{byte:02X}>")
}

fn parse_byte_token(token: &str) -> Option<u8> {
    let hex = token.strip_prefix("<0x")?.strip_suffix('>')?;
    if hex.len() != 2 {
        return None;
    }
    u8::from_str_radix(hex, 16).ok()
}

/// Fertility measurement for one labelled corpus: tokens per word at the
/// corpus level (total tokens over total whitespace-delimited words).
#[derive(Debug, Clone, PartialEq)]
pub struct FertilityEntry<S: Real = f64> {
    pub label: String,
    pub word_count: u64,
    pub token_count: u64,
    pub fertility: S,
}

/// Accumulated entries, one per corpus label.
#[derive(Debug, Clone, Default)]
pub struct FertilityReport<S: Real = f64> {
    pub entries: Vec<FertilityEntry<S>>,
}

impl<S: Real> FertilityReport<S> {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\tword_count\ttoken_count\tfertility\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.4}\n",
                e.label,
                e.word_count,
                e.token_count,
                e.fertility.to_f64().unwrap()
            ));
        }
        out
    }
}

/// Count words and tokens over a line corpus. Lines are encoded
/// independently; the ratio is corpus-level, not a mean of per-line ratios.
pub fn fertility<S, I, T>(
    model: &BpeModel,
    corpus: I,
    label: &str,
) -> Result<FertilityEntry<S>, TokenizerError>
where
    S: Real,
    I: IntoIterator<Item = T>,
    T: AsRef<str>,
{
    let mut word_count = 0u64;
    let mut token_count = 0u64;
    for line in corpus {
        let line = line.as_ref();
        word_count += line.split_whitespace().count() as u64;
        token_count += model.encode(line)?.len() as u64;
    }
    if word_count == 0 {
        return Err(TokenizerError::EmptyCorpus);
    }
    let fertility = S::from_u64(token_count).unwrap() / S::from_u64(word_count).unwrap();
    Ok(FertilityEntry { label: label.to_string(), word_count, token_count, fertility })
}

#[cfg(test)]
pub(crate) mod tests_support {
    use std::collections::HashMap;

    use super::{byte_token, BpeModel, DEFAULT_WORD_MARKER};

    /// A model over printable ASCII plus all byte tokens and a few merges.
    pub(crate) fn ascii_model() -> BpeModel {
        let mut vocab = HashMap::new();
        let mut next = 0u32;
        let add = |t: String, vocab: &mut HashMap<String, u32>, next: &mut u32| {
            if !vocab.contains_key(&t) {
                vocab.insert(t, *next);
                *next += 1;
            }
        };
        add("\u{2581}".to_string(), &mut vocab, &mut next);
        for b in 0..=255u8 {
            add(byte_token(b), &mut vocab, &mut next);
        }
        for c in ' '..='~' {
            add(c.to_string(), &mut vocab, &mut next);
        }
        let merges_src = ["t h", "th e", "i n", "a n", "r e", "o n", "e r", "he l",
            "\u{2581} t", "\u{2581} a", "\u{2581} s"];
        let mut merges = Vec::new();
        for m in merges_src {
            let (l, r) = m.split_once(' ').unwrap();
            add(format!("{l}{r}"), &mut vocab, &mut next);
            merges.push((l.to_string(), r.to_string()));
        }
        BpeModel::new(vocab, merges, true, DEFAULT_WORD_MARKER, true).unwrap()
    }
}
