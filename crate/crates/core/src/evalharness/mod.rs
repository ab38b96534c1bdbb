//! Prompt-based evaluation harness: template rendering, n-shot assembly,
//! greedy generation and log-probability option scoring through a pluggable
//! backend, with native-script / roman-script evaluation protocols.

mod backend;

pub use backend::{CompletionBackend, HttpBackend, HttpBackendConfig, StubBackend};

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{self, ChrfParams};
use crate::translit::{
    deromanize_with_lm, RescoreConfig, SchemeKind, SchemeTable, TranslitError, UnigramLm,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("template placeholder `{{{0}}}` is not bound by the example")]
    UnboundPlaceholder(String),
    #[error("template: {0}")]
    TemplateParse(String),
    #[error("task: {0}")]
    TaskParse(String),
    #[error("backend: {0}")]
    Backend(String),
    #[error("shot pool has {available} usable examples, {requested} requested")]
    ShotPool { available: usize, requested: usize },
    #[error("{0} is required for this script protocol")]
    MissingResource(&'static str),
    #[error(transparent)]
    Translit(#[from] TranslitError),
}

/// A prompt template: preamble, an example block rendered per shot with its
/// answer, and a query block (the example block truncated before the answer
/// slot). Placeholders use `{name}` syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub task: String,
    pub preamble: String,
    pub example_block: String,
    pub query_block: String,
}

impl PromptTemplate {
    /// Parse the template file format: an optional `task: <id>` line, then
    /// `--- preamble ---`, `--- example ---` and `--- query ---` sections.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut task = String::new();
        let mut sections: BTreeMap<&str, String> = BTreeMap::new();
        let mut current: Option<&str> = None;
        for line in text.lines() {
            match line.trim() {
                "--- preamble ---" => current = Some("preamble"),
                "--- example ---" => current = Some("example"),
                "--- query ---" => current = Some("query"),
                _ => match current {
                    Some(section) => {
                        let buf = sections.entry(section).or_default();
                        if !buf.is_empty() {
                            buf.push('\n');
                        }
                        buf.push_str(line);
                    }
                    None => {
                        if let Some(rest) = line.strip_prefix("task:") {
                            task = rest.trim().to_string();
                        } else if !line.trim().is_empty() {
                            return Err(HarnessError::TemplateParse(format!(
                                "unexpected content before first section: `{line}`"
                            )));
                        }
                    }
                },
            }
        }
        let take = |sections: &mut BTreeMap<&str, String>, name: &str| {
            sections.remove(name).map(|s| s.trim_end_matches('\n').to_string())
        };
        let preamble = take(&mut sections, "preamble").unwrap_or_default();
        let example_block = take(&mut sections, "example")
            .ok_or_else(|| HarnessError::TemplateParse("missing `--- example ---`".into()))?;
        let query_block = take(&mut sections, "query")
            .ok_or_else(|| HarnessError::TemplateParse("missing `--- query ---`".into()))?;
        Ok(Self { task, preamble, example_block, query_block })
    }

    /// The answer slot: the placeholder present in the example block but not
    /// the query block. Exactly one must exist.
    pub fn answer_field(&self) -> Result<String, HarnessError> {
        let diff: Vec<String> = placeholders(&self.example_block)
            .difference(&placeholders(&self.query_block))
            .cloned()
            .collect();
        match diff.as_slice() {
            [one] => Ok(one.clone()),
            [] => Err(HarnessError::TemplateParse(
                "example block adds no placeholder over the query block".into(),
            )),
            many => Err(HarnessError::TemplateParse(format!(
                "example block adds {} placeholders over the query block: {:?}",
                many.len(),
                many
            ))),
        }
    }
}

fn placeholders(block: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut rest = block;
    while let Some(start) = rest.find('{') {
        rest = &rest[start + 1..];
        if let Some(end) = rest.find('}') {
            let name = &rest[..end];
            if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                out.insert(name.to_string());
            }
            rest = &rest[end + 1..];
        } else {
            break;
        }
    }
    out
}

fn render_block(block: &str, fields: &BTreeMap<String, String>) -> Result<String, HarnessError> {
    let mut out = String::with_capacity(block.len());
    let mut rest = block;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        rest = &rest[start + 1..];
        let end = match rest.find('}') {
            Some(e) => e,
            None => {
                out.push('{');
                break;
            }
        };
        let name = &rest[..end];
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            out.push('{');
            continue;
        }
        match fields.get(name) {
            Some(value) => out.push_str(value),
            None => return Err(HarnessError::UnboundPlaceholder(name.to_string())),
        }
        rest = &rest[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// One task example: an id plus named string fields feeding the template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub id: String,
    #[serde(flatten)]
    pub fields: BTreeMap<String, String>,
}

impl Example {
    pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<Self>, HarnessError> {
        let mut out = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| HarnessError::TaskParse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let ex: Example = serde_json::from_str(&line).map_err(|e| {
                HarnessError::TaskParse(format!("line {}: {e}", idx + 1))
            })?;
            out.push(ex);
        }
        Ok(out)
    }
}

/// Render just the query block for one example (no preamble, no shots).
pub fn render_query(
    template: &PromptTemplate,
    example: &Example,
) -> Result<String, HarnessError> {
    render_block(&template.query_block, &example.fields)
}

/// Assemble a full prompt: preamble, each shot rendered with its answer,
/// then the query rendered without one, joined by blank lines.
pub fn render_prompt(
    template: &PromptTemplate,
    shots: &[Example],
    query: &Example,
) -> Result<String, HarnessError> {
    let mut blocks = Vec::with_capacity(shots.len() + 2);
    if !template.preamble.is_empty() {
        blocks.push(template.preamble.clone());
    }
    for shot in shots {
        blocks.push(render_block(&template.example_block, &shot.fields)?);
    }
    blocks.push(render_block(&template.query_block, &query.fields)?);
    Ok(blocks.join("\n\n"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Classification,
    Generation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Accuracy,
    F1,
    RougeL,
    Chrf,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Accuracy => "accuracy",
            MetricKind::F1 => "f1",
            MetricKind::RougeL => "rouge_l",
            MetricKind::Chrf => "chrf",
        }
    }
}

/// Task description: what to ask, how to score it, and the shot pool.
#[derive(Debug, Clone)]
pub struct TaskSpec {
    pub task: String,
    pub kind: TaskKind,
    /// Class labels; non-empty exactly for classification tasks.
    pub options: Vec<String>,
    pub metric: MetricKind,
    pub n_shots: usize,
    pub shot_pool: Vec<Example>,
    pub seed: u64,
}

impl TaskSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        match self.kind {
            TaskKind::Classification if self.options.is_empty() => Err(HarnessError::TaskParse(
                "classification tasks need a non-empty options list".into(),
            )),
            TaskKind::Generation if !self.options.is_empty() => Err(HarnessError::TaskParse(
                "generation tasks take no options".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Which script a text stream is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptForm {
    Native,
    Roman,
}

/// Evaluation knobs. References are expected in native script; conversions
/// for the chosen protocol happen inside [`evaluate_task`].
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub model_script: ScriptForm,
    pub eval_script: ScriptForm,
    pub max_new_tokens: usize,
    pub stop: Vec<String>,
    /// Prepend one space to each option continuation when scoring.
    pub space_before_option: bool,
    /// Divide option log-probabilities by continuation length in chars.
    pub normalize_option_logprob: bool,
    pub rescore: RescoreConfig<f64>,
    pub jobs: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            model_script: ScriptForm::Native,
            eval_script: ScriptForm::Native,
            max_new_tokens: 256,
            stop: vec!["\n\n".to_string()],
            space_before_option: true,
            normalize_option_logprob: false,
            rescore: RescoreConfig::default(),
            jobs: 1,
        }
    }
}

/// Score every option's continuation and return the argmax label (ties go to
/// the first listed option) along with the per-option log-probabilities.
pub fn classify_by_logprob(
    backend: &dyn CompletionBackend,
    prompt: &str,
    options: &[String],
    config: &EvalConfig,
) -> Result<(String, Vec<(String, f64)>), HarnessError> {
    if options.is_empty() {
        return Err(HarnessError::TaskParse("options must be non-empty".into()));
    }
    let mut scored = Vec::with_capacity(options.len());
    for option in options {
        let continuation = if config.space_before_option {
            format!(" {option}")
        } else {
            option.clone()
        };
        let mut lp = backend
            .logprob(prompt, &continuation)
            .map_err(|e| HarnessError::Backend(format!("option `{option}`: {e}")))?;
        if config.normalize_option_logprob {
            lp /= continuation.chars().count().max(1) as f64;
        }
        scored.push((option.clone(), lp));
    }
    let mut best = 0usize;
    for (i, (_, lp)) in scored.iter().enumerate().skip(1) {
        if *lp > scored[best].1 {
            best = i;
        }
    }
    Ok((scored[best].0.clone(), scored))
}

/// Greedy generation truncated at the earliest stop string, trimmed.
pub fn generate(
    backend: &dyn CompletionBackend,
    prompt: &str,
    max_new_tokens: usize,
    stop: &[String],
) -> Result<String, HarnessError> {
    let raw = backend.complete(prompt, max_new_tokens)?;
    let cut = stop
        .iter()
        .filter_map(|s| raw.find(s.as_str()))
        .min()
        .unwrap_or(raw.len());
    Ok(raw[..cut].trim().to_string())
}

/// Per-example outcome, kept for audit.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleResult {
    pub id: String,
    pub prompt: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub option_logprobs: Option<Vec<(String, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Full task report: per-example results ordered by input position plus the
/// aggregate metric over scored examples.
#[derive(Debug, Clone, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub metric: String,
    pub aggregate: f64,
    pub scored: usize,
    pub failures: usize,
    pub examples: Vec<ExampleResult>,
}

impl TaskReport {
    pub fn aggregate_tsv(&self) -> String {
        format!(
            "task\tmetric\taggregate\tscored\tfailures\n{}\t{}\t{:.4}\t{}\t{}\n",
            self.task, self.metric, self.aggregate, self.scored, self.failures
        )
    }
}

/// Evaluate a task end to end. Per-example failures are recorded in the
/// report and never abort the run. Generation outputs are converted between
/// scripts per the protocol: roman model outputs are transliterated back to
/// native before native-script metrics; native outputs (and references) are
/// romanized before roman-script metrics.
pub fn evaluate_task(
    task: &TaskSpec,
    template: &PromptTemplate,
    examples: &[Example],
    backend: &dyn CompletionBackend,
    scheme: Option<&SchemeTable<f64>>,
    lm: Option<&UnigramLm<f64>>,
    config: &EvalConfig,
) -> Result<TaskReport, HarnessError> {
    task.validate()?;
    let answer_field = template.answer_field()?;
    let needs_scheme = task.kind == TaskKind::Generation
        && (config.model_script != config.eval_script
            || config.eval_script == ScriptForm::Roman);
    if needs_scheme && scheme.is_none() {
        return Err(HarnessError::MissingResource("a scheme table"));
    }
    if let (Some(table), true) = (scheme, needs_scheme) {
        let needs_lm = config.model_script == ScriptForm::Roman
            && config.eval_script == ScriptForm::Native
            && table.kind() == SchemeKind::Natural;
        if needs_lm && lm.is_none() {
            return Err(HarnessError::MissingResource("a unigram LM"));
        }
    }

    // fixed seeded shot order for the whole run; the query is never its own shot
    let mut shot_order: Vec<usize> = (0..task.shot_pool.len()).collect();
    shot_order.shuffle(&mut ChaCha8Rng::seed_from_u64(task.seed));
    let shots_for = |query_id: &str| -> Result<Vec<Example>, HarnessError> {
        let picked: Vec<Example> = shot_order
            .iter()
            .map(|&i| &task.shot_pool[i])
            .filter(|ex| ex.id != query_id)
            .take(task.n_shots)
            .cloned()
            .collect();
        if picked.len() < task.n_shots {
            return Err(HarnessError::ShotPool {
                available: picked.len(),
                requested: task.n_shots,
            });
        }
        Ok(picked)
    };

    let eval_one = |example: &Example| -> ExampleResult {
        let mut result = ExampleResult {
            id: example.id.clone(),
            prompt: String::new(),
            raw_output: None,
            prediction: None,
            reference: None,
            option_logprobs: None,
            score: None,
            error: None,
        };
        let step = (|| -> Result<(), HarnessError> {
            let shots = shots_for(&example.id)?;
            let prompt = render_prompt(template, &shots, example)?;
            result.prompt = prompt.clone();
            let gold = example.fields.get(&answer_field).cloned().ok_or_else(|| {
                HarnessError::UnboundPlaceholder(answer_field.clone())
            })?;
            match task.kind {
                TaskKind::Classification => {
                    let (label, logprobs) =
                        classify_by_logprob(backend, &prompt, &task.options, config)?;
                    result.raw_output = Some(label.clone());
                    result.option_logprobs = Some(logprobs);
                    result.score = Some(f64::from(label == gold));
                    result.reference = Some(gold);
                    result.prediction = Some(label);
                }
                TaskKind::Generation => {
                    let raw = generate(backend, &prompt, config.max_new_tokens, &config.stop)?;
                    result.raw_output = Some(raw.clone());
                    let prediction = convert_prediction(&raw, scheme, lm, config)?;
                    let reference = convert_reference(&gold, scheme, config)?;
                    let score = match task.metric {
                        MetricKind::Chrf => {
                            metrics::chrf(&prediction, &reference, &ChrfParams::default())
                        }
                        MetricKind::RougeL => {
                            metrics::rouge_l_text::<f64>(&prediction, &reference).f1
                        }
                        MetricKind::Accuracy | MetricKind::F1 => {
                            f64::from(prediction == reference)
                        }
                    };
                    result.score = Some(score);
                    result.prediction = Some(prediction);
                    result.reference = Some(reference);
                }
            }
            Ok(())
        })();
        if let Err(e) = step {
            result.error = Some(e.to_string());
        }
        result
    };

    let results: Vec<ExampleResult> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| HarnessError::Backend(e.to_string()))?;
        pool.install(|| {
            use rayon::prelude::*;
            examples.par_iter().map(eval_one).collect()
        })
    } else {
        examples.iter().map(eval_one).collect()
    };

    let failures = results.iter().filter(|r| r.error.is_some()).count();
    let scored: Vec<&ExampleResult> = results.iter().filter(|r| r.score.is_some()).collect();
    let aggregate = match task.metric {
        MetricKind::Accuracy => mean(scored.iter().filter_map(|r| r.score)),
        MetricKind::RougeL => mean(scored.iter().filter_map(|r| r.score)),
        MetricKind::F1 => macro_f1(
            &task.options,
            scored
                .iter()
                .filter_map(|r| Some((r.reference.as_deref()?, r.prediction.as_deref()?))),
        ),
        MetricKind::Chrf => {
            let pairs: Vec<(&str, &str)> = scored
                .iter()
                .filter_map(|r| Some((r.prediction.as_deref()?, r.reference.as_deref()?)))
                .collect();
            metrics::chrf_corpus(&pairs, &ChrfParams::default())
        }
    };
    Ok(TaskReport {
        task: task.task.clone(),
        metric: task.metric.name().to_string(),
        aggregate,
        scored: scored.len(),
        failures,
        examples: results,
    })
}

fn convert_prediction(
    raw: &str,
    scheme: Option<&SchemeTable<f64>>,
    lm: Option<&UnigramLm<f64>>,
    config: &EvalConfig,
) -> Result<String, HarnessError> {
    match (config.model_script, config.eval_script) {
        (ScriptForm::Roman, ScriptForm::Native) => {
            let table = scheme.ok_or(HarnessError::MissingResource("a scheme table"))?;
            match table.kind() {
                SchemeKind::Deterministic => Ok(table.deromanize_deterministic(raw)?),
                SchemeKind::Natural => {
                    let lm = lm.ok_or(HarnessError::MissingResource("a unigram LM"))?;
                    Ok(deromanize_with_lm(table, lm, None, raw, config.rescore)?)
                }
            }
        }
        (ScriptForm::Native, ScriptForm::Roman) => {
            let table = scheme.ok_or(HarnessError::MissingResource("a scheme table"))?;
            Ok(table.romanize(raw))
        }
        _ => Ok(raw.to_string()),
    }
}

fn convert_reference(
    gold: &str,
    scheme: Option<&SchemeTable<f64>>,
    config: &EvalConfig,
) -> Result<String, HarnessError> {
    match config.eval_script {
        ScriptForm::Native => Ok(gold.to_string()),
        ScriptForm::Roman => {
            let table = scheme.ok_or(HarnessError::MissingResource("a scheme table"))?;
            Ok(table.romanize(gold))
        }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Macro-averaged F1 over the label set from (gold, predicted) pairs.
fn macro_f1<'a>(options: &[String], pairs: impl Iterator<Item = (&'a str, &'a str)>) -> f64 {
    let pairs: Vec<(&str, &str)> = pairs.collect();
    if pairs.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    for label in options {
        let tp = pairs.iter().filter(|(g, p)| g == label && p == label).count() as f64;
        let fp = pairs.iter().filter(|(g, p)| g != label && p == label).count() as f64;
        let fn_ = pairs.iter().filter(|(g, p)| g == label && p != label).count() as f64;
        let f1 = if tp > 0.0 { 2.0 * tp / (2.0 * tp + fp + fn_) } else { 0.0 };
        total += f1;
    }
    total / options.len() as f64
}
