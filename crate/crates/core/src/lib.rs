//! romankit: romanization as a text interface for Indic-script NLP.
//!
//! The crate covers the full loop around a romanized LLM workflow without
//! touching model weights: script-aware transliteration (reversible and
//! natural schemes, with unigram-LM rescored inversion), subword fertility
//! measurement, chrF / Rouge-L / embedding-similarity metrics, pretraining
//! and instruction-tuning data preparation, and a prompt evaluation harness
//! driven through a pluggable completion backend.
//!
//! Numeric kernels are generic over the scalar type via [`num::Real`];
//! the aliases below pin the default `f64` instantiations that the CLI and
//! file formats use.

pub mod evalharness;
pub mod metrics;
pub mod num;
pub mod pipeline;
pub mod scripts;
pub mod tokenizer;
pub mod translit;

pub use num::Real;

/// NFC-normalize text. Every operation expects its input in this form;
/// ingestion points normalize, they never reject decomposed input.
pub fn nfc(text: &str) -> String {
    use unicode_normalization::UnicodeNormalization;
    text.nfc().collect()
}

/// Default-scalar alias for [`translit::SchemeTable`].
pub type SchemeTable = translit::SchemeTable<f64>;
/// Default-scalar alias for [`translit::UnigramLm`].
pub type UnigramLm = translit::UnigramLm<f64>;
/// Default-scalar alias for [`translit::RescoreConfig`].
pub type RescoreConfig = translit::RescoreConfig<f64>;
/// Default-scalar alias for [`metrics::ChrfParams`].
pub type ChrfParams = metrics::ChrfParams<f64>;
/// Default-scalar alias for [`metrics::RougeScores`].
pub type RougeScores = metrics::RougeScores<f64>;
/// Default-scalar alias for [`metrics::EmbeddingSet`].
pub type EmbeddingSet = metrics::EmbeddingSet<f64>;
/// Default-scalar alias for [`tokenizer::FertilityEntry`].
pub type FertilityEntry = tokenizer::FertilityEntry<f64>;
/// Default-scalar alias for [`tokenizer::FertilityReport`].
pub type FertilityReport = tokenizer::FertilityReport<f64>;
