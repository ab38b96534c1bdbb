//! Word-level unigram language model with add-alpha smoothing, used to pick
//! among inverse-transliteration candidates.

use std::collections::BTreeMap;

use unicode_normalization::UnicodeNormalization;

use super::TranslitError;
use crate::num::Real;

/// Word-frequency model. `score(w) = ln((count(w) + α) / (total + α·(V+1)))`
/// where V is the vocabulary size; the `+1` is the single OOV bucket, so the
/// smoothed probabilities sum to one exactly.
#[derive(Debug, Clone)]
pub struct UnigramLm<S: Real = f64> {
    counts: BTreeMap<String, u64>,
    total: u64,
    alpha: S,
}

impl<S: Real> UnigramLm<S> {
    /// Count whitespace-delimited words over NFC-normalized lines.
    /// Deterministic given identical input order.
    pub fn train<I, T>(corpus: I, alpha: S) -> Result<Self, TranslitError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut counts = BTreeMap::new();
        let mut total = 0u64;
        for line in corpus {
            let line: String = line.as_ref().nfc().collect();
            for word in line.split_whitespace() {
                *counts.entry(word.to_string()).or_insert(0) += 1;
                total += 1;
            }
        }
        if total == 0 {
            return Err(TranslitError::EmptyCorpus);
        }
        Ok(Self { counts, total, alpha })
    }

    pub fn from_counts(counts: BTreeMap<String, u64>, alpha: S) -> Result<Self, TranslitError> {
        let total = counts.values().sum();
        if total == 0 {
            return Err(TranslitError::EmptyCorpus);
        }
        Ok(Self { counts, total, alpha })
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocab_size(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Smoothed log-probability; finite and negative for alpha > 0.
    pub fn score(&self, word: &str) -> S {
        let count = S::from_u64(self.count(word)).unwrap();
        let total = S::from_u64(self.total).unwrap();
        let vocab = S::from_usize(self.vocab_size() + 1).unwrap();
        ((count + self.alpha) / (total + self.alpha * vocab)).ln()
    }

    /// Score of any unseen word (the OOV bucket).
    pub fn oov_score(&self) -> S {
        let total = S::from_u64(self.total).unwrap();
        let vocab = S::from_usize(self.vocab_size() + 1).unwrap();
        (self.alpha / (total + self.alpha * vocab)).ln()
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Serialize as TSV: a header line carrying alpha, then `word<TAB>count`
    /// rows in lexicographic word order.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("#alpha\t{:?}\n", self.alpha.to_f64().unwrap());
        for (word, count) in &self.counts {
            out.push_str(word);
            out.push('\t');
            out.push_str(&count.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TranslitError> {
        let mut alpha = None;
        let mut counts = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            if let Some(rest) = raw.strip_prefix("#alpha") {
                let a: f64 = rest.trim().parse().map_err(|e| TranslitError::LmParse {
                    line,
                    msg: format!("bad alpha: {e}"),
                })?;
                if a < 0.0 || !a.is_finite() {
                    return Err(TranslitError::LmParse {
                        line,
                        msg: format!("alpha must be non-negative, got {a}"),
                    });
                }
                alpha = Some(S::from_f64(a).unwrap());
                continue;
            }
            if raw.starts_with('#') {
                continue;
            }
            let (word, count) = raw.split_once('\t').ok_or(TranslitError::LmParse {
                line,
                msg: "expected `word<TAB>count`".into(),
            })?;
            let count: u64 = count.trim().parse().map_err(|e| TranslitError::LmParse {
                line,
                msg: format!("bad count: {e}"),
            })?;
            *counts.entry(word.nfc().collect::<String>()).or_insert(0) += count;
        }
        let alpha = alpha.ok_or(TranslitError::LmParse {
            line: 0,
            msg: "missing `#alpha` header line".into(),
        })?;
        Self::from_counts(counts, alpha)
    }
}
