//! Forward romanization and inverse transliteration.
//!
//! Two scheme families: deterministic tables are reversible by construction
//! (an extended ITRANS-style mapping ships for all four scripts); natural
//! tables are lossy, weighted mappings whose inversion generates candidate
//! lattices rescored with a word-level unigram LM.

mod scheme;
mod unigram;

pub use scheme::{
    Alternative, Candidate, GraphemeKind, SchemeKind, SchemeTable, SEPARATOR,
};
pub use unigram::UnigramLm;

use thiserror::Error;

use crate::num::Real;

#[derive(Debug, Error)]
pub enum TranslitError {
    #[error("scheme table line {line}: {msg}")]
    SchemeParse { line: usize, msg: String },
    #[error("unigram LM line {line}: {msg}")]
    LmParse { line: usize, msg: String },
    #[error("scheme table has gaps for in-script graphemes: {0}")]
    CoverageGaps(String),
    #[error("table is not reversible: `{native}` romanizes to `{roman}` but parses back to `{back}`")]
    RoundTrip { native: String, roman: String, back: String },
    #[error("ambiguous parse of roman `{roman}`")]
    AmbiguousParse { roman: String },
    #[error("roman word `{word}` has no parse against this table")]
    Unparseable { word: String },
    #[error("operation requires a {expected} table")]
    KindMismatch { expected: &'static str },
    #[error("corpus contains no words")]
    EmptyCorpus,
    #[error("unknown built-in scheme `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Script(#[from] crate::scripts::ScriptError),
}

/// Knobs for LM-rescored inversion.
#[derive(Debug, Clone, Copy)]
pub struct RescoreConfig<S> {
    /// Candidates retained per word before rescoring.
    pub k: usize,
    /// Mixing factor on the log generation weight; 0 scores by the LM alone.
    pub lambda: S,
}

impl<S: Real> Default for RescoreConfig<S> {
    fn default() -> Self {
        Self { k: 8, lambda: S::zero() }
    }
}

/// Convert romanized text back to native script with a natural table,
/// choosing per word the candidate maximizing
/// `lm.score(candidate) + lambda * ln(generation weight)` (ties go to the
/// lexicographically smaller candidate). Words with no parse fall back to the
/// deterministic table when one is given, else pass through verbatim.
/// Whitespace and punctuation are preserved.
pub fn deromanize_with_lm<S: Real>(
    table: &SchemeTable<S>,
    lm: &UnigramLm<S>,
    fallback: Option<&SchemeTable<S>>,
    text: &str,
    config: RescoreConfig<S>,
) -> Result<String, TranslitError> {
    if table.kind() != SchemeKind::Natural {
        return Err(TranslitError::KindMismatch { expected: "natural" });
    }
    if let Some(f) = fallback {
        if f.kind() != SchemeKind::Deterministic {
            return Err(TranslitError::KindMismatch { expected: "deterministic" });
        }
    }
    let mut out = String::new();
    let mut rest = text;
    while !rest.is_empty() {
        let split = rest.find(|c: char| !c.is_whitespace()).unwrap_or(rest.len());
        out.push_str(&rest[..split]);
        rest = &rest[split..];
        if rest.is_empty() {
            break;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let word = &rest[..end];
        out.push_str(&convert_word(table, lm, fallback, word, config)?);
        rest = &rest[end..];
    }
    Ok(out)
}

fn convert_word<S: Real>(
    table: &SchemeTable<S>,
    lm: &UnigramLm<S>,
    fallback: Option<&SchemeTable<S>>,
    word: &str,
    config: RescoreConfig<S>,
) -> Result<String, TranslitError> {
    // punctuation affixes are preserved around the converted core
    let core_start = word
        .find(|c: char| c.is_alphanumeric())
        .unwrap_or(word.len());
    let core_end = word
        .rfind(|c: char| c.is_alphanumeric())
        .map(|i| i + word[i..].chars().next().unwrap().len_utf8())
        .unwrap_or(core_start);
    let (prefix, tail) = word.split_at(core_start);
    let (core, suffix) = tail.split_at(core_end - core_start);
    if core.is_empty() {
        return Ok(word.to_string());
    }
    let converted = match table.natural_candidates(core, config.k) {
        Ok(candidates) => {
            let mut best: Option<(S, &Candidate<S>)> = None;
            for candidate in &candidates {
                let mut score = lm.score(&candidate.native);
                if config.lambda != S::zero() {
                    score = score + config.lambda * candidate.weight.ln();
                }
                let better = match &best {
                    None => true,
                    Some((s, b)) => {
                        score > *s || (score == *s && candidate.native < b.native)
                    }
                };
                if better {
                    best = Some((score, candidate));
                }
            }
            best.expect("candidate list is non-empty").1.native.clone()
        }
        Err(TranslitError::Unparseable { .. }) => match fallback {
            Some(det) => det.deromanize_deterministic(core)?,
            None => core.to_string(),
        },
        Err(e) => return Err(e),
    };
    Ok(format!("{prefix}{converted}{suffix}"))
}

#[cfg(test)]
mod tests;
