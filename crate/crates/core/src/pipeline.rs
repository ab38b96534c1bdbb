//! Data preparation: continual-pretraining mixes, instruction-tuning sets,
//! and sequence packing to the training context length.
//!
//! Everything here is a pure function of (inputs, seed): shuffles and
//! sampling run on ChaCha8 seeded from the given 64-bit seed, so reruns are
//! byte-identical.

use std::io::{BufRead, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::num::Real;
use crate::tokenizer::{BpeModel, TokenizerError};
use crate::translit::SchemeTable;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input stream `{0}` is empty")]
    EmptyStream(&'static str),
    #[error("source `{name}` has {available} examples, {requested} requested")]
    InsufficientSource { name: &'static str, available: usize, requested: usize },
    #[error("record {id}: expected lang `{expected}`, found `{found}`")]
    LangMismatch { id: String, expected: String, found: String },
    #[error("record {id}: {msg}")]
    InvalidRecord { id: String, msg: String },
    #[error("line {line}: {msg}")]
    Jsonl { line: usize, msg: String },
    #[error("packed file: {0}")]
    PackedFormat(String),
    #[error(transparent)]
    Tokenizer(#[from] TokenizerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One pretraining document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub lang: String,
    pub text: String,
}

impl Document {
    fn normalize(mut self) -> Result<Self, PipelineError> {
        self.text = self.text.nfc().collect();
        if self.text.trim().is_empty() {
            return Err(PipelineError::InvalidRecord {
                id: self.id,
                msg: "text is empty after normalization".into(),
            });
        }
        Ok(self)
    }

    pub fn word_count(&self) -> u64 {
        self.text.split_whitespace().count() as u64
    }
}

/// Where an instruction-tuning example came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Flan,
    Dolly,
    Translation,
}

/// Translation direction for translation-sourced examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "en-xx")]
    EnToXx,
    #[serde(rename = "xx-en")]
    XxToEn,
}

/// One instruction-tuning record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IftExample {
    pub id: String,
    pub lang: String,
    pub source: SourceKind,
    pub instruction: String,
    #[serde(default)]
    pub input: String,
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

impl IftExample {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.instruction.is_empty() || self.output.is_empty() {
            return Err(PipelineError::InvalidRecord {
                id: self.id.clone(),
                msg: "instruction and output must be non-empty".into(),
            });
        }
        if (self.source == SourceKind::Translation) != self.direction.is_some() {
            return Err(PipelineError::InvalidRecord {
                id: self.id.clone(),
                msg: "direction must be present exactly for translation examples".into(),
            });
        }
        Ok(())
    }

    fn normalize(mut self) -> Result<Self, PipelineError> {
        self.instruction = self.instruction.nfc().collect();
        self.input = self.input.nfc().collect();
        self.output = self.output.nfc().collect();
        self.validate()?;
        Ok(self)
    }
}

/// Per-language sampling plan. The standard mix is 65k Flan + 15k Dolly +
/// 20k translation per direction = 120k examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixSpec {
    pub flan: usize,
    pub dolly: usize,
    pub translation_en_xx: usize,
    pub translation_xx_en: usize,
    pub seed: u64,
    pub script_mode: ScriptMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptMode {
    Native,
    Romanized,
}

impl MixSpec {
    pub fn standard(seed: u64, script_mode: ScriptMode) -> Self {
        Self {
            flan: 65_000,
            dolly: 15_000,
            translation_en_xx: 20_000,
            translation_xx_en: 20_000,
            seed,
            script_mode,
        }
    }

    pub fn total(&self) -> usize {
        self.flan + self.dolly + self.translation_en_xx + self.translation_xx_en
    }

    /// The standard mix always sums to 120k per language.
    pub fn is_standard_total(&self) -> bool {
        self.total() == 120_000
    }
}

/// Source pools for one language.
#[derive(Debug, Clone, Default)]
pub struct IftSources {
    pub flan: Vec<IftExample>,
    pub dolly: Vec<IftExample>,
    pub translation_en_xx: Vec<IftExample>,
    pub translation_xx_en: Vec<IftExample>,
}

/// Build a 1:1 word-count pretraining mix: native documents (romanized when
/// a scheme is given) plus English documents greedily drawn (cycling if the
/// pool is short) while they fit under the native word total, then a seeded
/// shuffle of the combined stream.
pub fn prep_cpt<S: Real>(
    native_docs: Vec<Document>,
    english_docs: Vec<Document>,
    scheme: Option<&SchemeTable<S>>,
    seed: u64,
) -> Result<Vec<Document>, PipelineError> {
    if native_docs.is_empty() {
        return Err(PipelineError::EmptyStream("native"));
    }
    if english_docs.is_empty() {
        return Err(PipelineError::EmptyStream("english"));
    }
    let mut out: Vec<Document> = Vec::with_capacity(native_docs.len() * 2);
    let mut native_words = 0u64;
    for doc in native_docs {
        let doc = doc.normalize()?;
        native_words += doc.word_count();
        out.push(match scheme {
            Some(table) => Document { text: table.romanize(&doc.text), ..doc },
            None => doc,
        });
    }
    let english: Vec<Document> =
        english_docs.into_iter().map(Document::normalize).collect::<Result<_, _>>()?;
    let mut english_words = 0u64;
    let mut i = 0usize;
    while english_words < native_words {
        let doc = &english[i % english.len()];
        if english_words + doc.word_count() > native_words {
            break;
        }
        english_words += doc.word_count();
        out.push(doc.clone());
        i += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.shuffle(&mut rng);
    Ok(out)
}

/// Romanize the text fields of one example. For translation examples the
/// English side stays untouched: the input for en→xx, the output for xx→en.
pub fn romanize_record<S: Real>(ex: IftExample, scheme: &SchemeTable<S>) -> IftExample {
    let (skip_input, skip_output) = match ex.direction {
        Some(Direction::EnToXx) => (true, false),
        Some(Direction::XxToEn) => (false, true),
        None => (false, false),
    };
    IftExample {
        instruction: scheme.romanize(&ex.instruction),
        input: if skip_input { ex.input } else { scheme.romanize(&ex.input) },
        output: if skip_output { ex.output } else { scheme.romanize(&ex.output) },
        ..ex
    }
}

/// Sample the configured counts from each source pool without replacement,
/// romanize when requested, and emit one seeded global shuffle. The output
/// cardinality is exactly `spec.total()`.
pub fn prep_ift<S: Real>(
    lang: &str,
    sources: IftSources,
    spec: &MixSpec,
    scheme: Option<&SchemeTable<S>>,
) -> Result<Vec<IftExample>, PipelineError> {
    if spec.script_mode == ScriptMode::Romanized && scheme.is_none() {
        return Err(PipelineError::EmptyStream("scheme (romanized mode needs one)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out: Vec<IftExample> = Vec::with_capacity(spec.total());
    let pools: [(&'static str, Vec<IftExample>, usize); 4] = [
        ("flan", sources.flan, spec.flan),
        ("dolly", sources.dolly, spec.dolly),
        ("translation_en_xx", sources.translation_en_xx, spec.translation_en_xx),
        ("translation_xx_en", sources.translation_xx_en, spec.translation_xx_en),
    ];
    for (name, pool, requested) in pools {
        if pool.len() < requested {
            return Err(PipelineError::InsufficientSource {
                name,
                available: pool.len(),
                requested,
            });
        }
        let picked = rand::seq::index::sample(&mut rng, pool.len(), requested);
        for idx in picked.iter() {
            let ex = pool[idx].clone().normalize()?;
            if ex.lang != lang {
                return Err(PipelineError::LangMismatch {
                    id: ex.id,
                    expected: lang.to_string(),
                    found: ex.lang,
                });
            }
            out.push(match (spec.script_mode, scheme) {
                (ScriptMode::Romanized, Some(table)) => romanize_record(ex, table),
                _ => ex,
            });
        }
    }
    out.shuffle(&mut rng);
    Ok(out)
}

/// Canonical training rendering of an example and the byte offset where the
/// output span begins, for downstream loss masking.
pub fn render_training_text(ex: &IftExample) -> (String, usize) {
    let mut text = ex.instruction.clone();
    if !ex.input.is_empty() {
        text.push_str("\n\n");
        text.push_str(&ex.input);
    }
    text.push_str("\n\n");
    let offset = text.len();
    text.push_str(&ex.output);
    (text, offset)
}

/// Encode documents, join them with an optional separator token, and split
/// greedily into sequences of exactly `max_len` (the final short sequence is
/// kept or dropped per `drop_partial`).
pub fn pack_sequences(
    model: &BpeModel,
    docs: &[Document],
    max_len: usize,
    separator: Option<u32>,
    drop_partial: bool,
) -> Result<Vec<Vec<u32>>, PipelineError> {
    assert!(max_len >= 2, "max_len must be at least 2");
    let mut stream: Vec<u32> = Vec::new();
    for (i, doc) in docs.iter().enumerate() {
        if i > 0 {
            if let Some(sep) = separator {
                stream.push(sep);
            }
        }
        stream.extend(model.encode(&doc.text)?);
    }
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(stream.len() / max_len + 1);
    let mut chunks = stream.chunks_exact(max_len);
    for chunk in &mut chunks {
        out.push(chunk.to_vec());
    }
    let tail = chunks.remainder();
    if !tail.is_empty() && !drop_partial {
        out.push(tail.to_vec());
    }
    Ok(out)
}

const PACK_MAGIC: &[u8; 8] = b"RKPACK01";
const INDEX_MAGIC: &[u8; 8] = b"RKPIDX01";

/// Write packed sequences as raw little-endian u32 ids behind a fixed header
/// (magic, max_len, count), with a sidecar index of token offsets (count+1
/// entries; the last is the total token count).
pub fn write_packed(
    data: &mut impl Write,
    index: &mut impl Write,
    sequences: &[Vec<u32>],
    max_len: usize,
) -> Result<(), PipelineError> {
    data.write_all(PACK_MAGIC)?;
    data.write_u32::<LittleEndian>(max_len as u32)?;
    data.write_u64::<LittleEndian>(sequences.len() as u64)?;
    index.write_all(INDEX_MAGIC)?;
    index.write_u64::<LittleEndian>(sequences.len() as u64)?;
    let mut offset = 0u64;
    for seq in sequences {
        index.write_u64::<LittleEndian>(offset)?;
        for &id in seq {
            data.write_u32::<LittleEndian>(id)?;
        }
        offset += seq.len() as u64;
    }
    index.write_u64::<LittleEndian>(offset)?;
    Ok(())
}

/// Read back a packed pair written by [`write_packed`].
pub fn read_packed(
    data: &mut impl std::io::Read,
    index: &mut impl std::io::Read,
) -> Result<(usize, Vec<Vec<u32>>), PipelineError> {
    let mut magic = [0u8; 8];
    data.read_exact(&mut magic)?;
    if &magic != PACK_MAGIC {
        return Err(PipelineError::PackedFormat("bad data magic".into()));
    }
    let max_len = data.read_u32::<LittleEndian>()? as usize;
    let count = data.read_u64::<LittleEndian>()? as usize;
    index.read_exact(&mut magic)?;
    if &magic != INDEX_MAGIC {
        return Err(PipelineError::PackedFormat("bad index magic".into()));
    }
    let index_count = index.read_u64::<LittleEndian>()? as usize;
    if index_count != count {
        return Err(PipelineError::PackedFormat(format!(
            "index holds {index_count} sequences, data header says {count}"
        )));
    }
    let mut offsets = Vec::with_capacity(count + 1);
    for _ in 0..=count {
        offsets.push(index.read_u64::<LittleEndian>()?);
    }
    let mut sequences = Vec::with_capacity(count);
    for w in offsets.windows(2) {
        let len = (w[1] - w[0]) as usize;
        let mut seq = Vec::with_capacity(len);
        for _ in 0..len {
            seq.push(data.read_u32::<LittleEndian>()?);
        }
        sequences.push(seq);
    }
    Ok((max_len, sequences))
}

/// Read JSON-lines records, normalizing text fields on ingestion.
pub fn read_documents(reader: impl BufRead) -> Result<Vec<Document>, PipelineError> {
    read_jsonl(reader)?.into_iter().map(Document::normalize).collect()
}

pub fn read_ift_examples(reader: impl BufRead) -> Result<Vec<IftExample>, PipelineError> {
    read_jsonl(reader)?.into_iter().map(IftExample::normalize).collect()
}

fn read_jsonl<T: serde::de::DeserializeOwned>(
    reader: impl BufRead,
) -> Result<Vec<T>, PipelineError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| PipelineError::Jsonl {
            line: idx + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(
    writer: &mut impl Write,
    records: &[T],
) -> Result<(), PipelineError> {
    for record in records {
        serde_json::to_writer(&mut *writer, record)
            .map_err(|e| PipelineError::Jsonl { line: 0, msg: e.to_string() })?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
