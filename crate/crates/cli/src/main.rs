//! romankit command line: every library operation as a batch subcommand.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

mod settings;

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use romankit::evalharness::{
    self, CompletionBackend, EvalConfig, Example, HttpBackend, HttpBackendConfig, MetricKind,
    PromptTemplate, ScriptForm, StubBackend, TaskKind, TaskSpec,
};
use romankit::metrics;
use romankit::pipeline::{self, IftSources, MixSpec, ScriptMode};
use romankit::tokenizer::{self, BpeModel};
use romankit::translit::{self, SchemeKind};
use romankit::{ChrfParams, EmbeddingSet, RescoreConfig, SchemeTable, UnigramLm};

use settings::Settings;

#[derive(Parser)]
#[command(name = "romankit", version, about = "Indic romanization toolkit", disable_help_subcommand = true)]
struct Cli {
    /// Config file in `key = value` form; ROMANKIT_* env vars override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random choice. Printed when used.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallelizable steps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward-transliterate native-script text to roman, line by line.
    Romanize(RomanizeArgs),
    /// Invert romanized text back to native script.
    Deromanize(DeromanizeArgs),
    /// Count words of a native corpus into a unigram LM file.
    TrainLm(TrainLmArgs),
    /// Measure tokens-per-word of a corpus under a BPE model.
    Fertility(FertilityArgs),
    /// chrF over a TSV batch of hypothesis/reference pairs.
    Chrf(ChrfArgs),
    /// Rouge-L over a TSV batch of hypothesis/reference pairs.
    Rouge(RougeArgs),
    /// Cosine similarity between two aligned embedding files.
    Embsim(EmbsimArgs),
    /// Build a 1:1 word-count pretraining mix of native and English docs.
    PrepCpt(PrepCptArgs),
    /// Sample an instruction-tuning mix from per-source pools.
    PrepIft(PrepIftArgs),
    /// Encode documents and pack them into fixed-length sequences.
    Pack(PackArgs),
    /// Render an n-shot prompt for one example.
    RenderPrompt(RenderPromptArgs),
    /// Run a task through a completion backend and score it.
    Eval(EvalArgs),
    /// Rewrite a tokenizer model file into the compact flat layout.
    ConvertModel(ConvertModelArgs),
}

#[derive(Args)]
struct RomanizeArgs {
    /// Built-in scheme name or a scheme TSV path.
    #[arg(long)]
    scheme: Option<String>,
    /// Input file (default stdin).
    input: Option<PathBuf>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeromanizeArgs {
    #[arg(long)]
    scheme: Option<String>,
    /// Unigram LM file; required for natural schemes.
    #[arg(long)]
    lm: Option<PathBuf>,
    /// Deterministic fallback scheme for unparseable words.
    #[arg(long)]
    fallback: Option<String>,
    /// Candidates kept per word before LM rescoring.
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Weight on the log generation weight (0 = rescore by the LM alone).
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainLmArgs {
    /// Add-alpha smoothing constant.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FertilityArgs {
    /// BPE model file (flat or nested tokenizer JSON).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Corpus label in the report (default: input file stem).
    #[arg(long)]
    label: Option<String>,
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricBatchArgs {
    /// TSV input `id<TAB>hypothesis<TAB>reference` (default stdin).
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChrfArgs {
    #[command(flatten)]
    batch: MetricBatchArgs,
    #[arg(long, default_value_t = 6)]
    char_order: usize,
    #[arg(long, default_value_t = 0)]
    word_order: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Average over all orders instead of only non-degenerate ones.
    #[arg(long)]
    no_effective_order: bool,
    /// Keep whitespace when extracting character n-grams.
    #[arg(long)]
    keep_whitespace: bool,
    /// Lowercase both sides before scoring.
    #[arg(long)]
    lowercase: bool,
}

#[derive(Args)]
struct RougeArgs {
    #[command(flatten)]
    batch: MetricBatchArgs,
}

#[derive(Args)]
struct EmbsimArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PrepCptArgs {
    #[arg(long)]
    native: PathBuf,
    #[arg(long)]
    english: PathBuf,
    /// Romanize native documents with this scheme.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PrepIftArgs {
    #[arg(long)]
    lang: String,
    #[arg(long)]
    flan: PathBuf,
    #[arg(long)]
    dolly: PathBuf,
    #[arg(long)]
    trans_en_xx: PathBuf,
    #[arg(long)]
    trans_xx_en: PathBuf,
    /// Per-source sample counts: flan, dolly, en-xx, xx-en.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [65000, 15000, 20000, 20000])]
    counts: Vec<usize>,
    /// Romanize sampled records with this scheme.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = 2048)]
    max_len: usize,
    /// Token id inserted between documents.
    #[arg(long)]
    separator_id: Option<u32>,
    /// Drop the final sequence when it is shorter than max-len.
    #[arg(long)]
    drop_partial: bool,
    /// Documents as JSON lines (default stdin).
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    index: PathBuf,
}

#[derive(Args)]
struct RenderPromptArgs {
    #[arg(long)]
    template: PathBuf,
    /// Task examples as JSON lines.
    #[arg(long)]
    task: PathBuf,
    /// Which example to render the query for.
    #[arg(long)]
    query_id: String,
    /// Shot pool (default: the task file).
    #[arg(long)]
    shots: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    n_shots: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    task_file: PathBuf,
    #[arg(long, value_parser = ["classification", "generation"])]
    kind: String,
    /// Class labels, comma separated (classification only).
    #[arg(long, value_delimiter = ',')]
    options: Vec<String>,
    #[arg(long, value_parser = ["accuracy", "f1", "rouge_l", "chrf"])]
    metric: String,
    #[arg(long, default_value_t = 0)]
    n_shots: usize,
    #[arg(long)]
    shots: Option<PathBuf>,
    /// `echo` answers the gold reference (romanized when --echo-romanized);
    /// `http` talks to a completions endpoint.
    #[arg(long, value_parser = ["echo", "http"], default_value = "echo")]
    backend: String,
    #[arg(long)]
    echo_romanized: bool,
    #[arg(long)]
    url: Option<String>,
    #[arg(long, value_parser = ["native", "roman"], default_value = "native")]
    model_script: String,
    #[arg(long, value_parser = ["native", "roman"], default_value = "native")]
    eval_script: String,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    lm: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    max_new_tokens: usize,
    /// Stop strings for generation (repeatable).
    #[arg(long)]
    stop: Vec<String>,
    /// Score options without the leading space.
    #[arg(long)]
    no_option_space: bool,
    /// Length-normalize option log-probabilities.
    #[arg(long)]
    normalize_options: bool,
    /// Per-example report as JSON lines.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertModelArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders its own message; usage problems exit 1
            let _ = err.print();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("romankit: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let settings = Settings::load(cli.config.as_deref(), cli.seed, cli.jobs)?;
    match cli.command {
        Command::Romanize(args) => romanize(args, &settings),
        Command::Deromanize(args) => deromanize(args, &settings),
        Command::TrainLm(args) => train_lm(args),
        Command::Fertility(args) => fertility(args, &settings),
        Command::Chrf(args) => chrf(args),
        Command::Rouge(args) => rouge(args),
        Command::Embsim(args) => embsim(args),
        Command::PrepCpt(args) => prep_cpt(args, &settings),
        Command::PrepIft(args) => prep_ift(args, &settings),
        Command::Pack(args) => pack(args, &settings),
        Command::RenderPrompt(args) => render_prompt(args, &settings),
        Command::Eval(args) => eval(args, &settings),
        Command::ConvertModel(args) => convert_model(args),
    }
}

// ---------------------------------------------------------------- helpers

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn load_scheme(spec: Option<&str>, settings: &Settings) -> Result<SchemeTable> {
    let spec = match spec {
        Some(s) => s.to_string(),
        None => settings
            .scheme
            .clone()
            .context("no scheme given (use --scheme or set `scheme` in the config)")?,
    };
    if Path::new(&spec).is_file() {
        let text = fs::read_to_string(&spec).with_context(|| format!("reading {spec}"))?;
        Ok(SchemeTable::parse(&text)?)
    } else {
        Ok(SchemeTable::builtin(&spec)?)
    }
}

fn load_model(path: Option<&Path>, settings: &Settings) -> Result<BpeModel> {
    let path = match path {
        Some(p) => p.to_path_buf(),
        None => settings
            .model
            .clone()
            .context("no model given (use --model or set `model` in the config)")?,
    };
    Ok(BpeModel::load(&path)?)
}

fn load_lm(path: Option<&Path>, settings: &Settings) -> Result<UnigramLm> {
    let path = match path {
        Some(p) => p.to_path_buf(),
        None => settings
            .lm
            .clone()
            .context("no LM given (use --lm or set `lm` in the config)")?,
    };
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(UnigramLm::parse(&text)?)
}

use romankit::nfc;

// ------------------------------------------------------------- subcommands

fn romanize(args: RomanizeArgs, settings: &Settings) -> Result<()> {
    let table = load_scheme(args.scheme.as_deref(), settings)?;
    let input = read_input(args.input.as_deref())?;
    let mut out = open_output(args.out.as_deref())?;
    for line in input.lines() {
        writeln!(out, "{}", table.romanize(&nfc(line)))?;
    }
    Ok(())
}

fn deromanize(args: DeromanizeArgs, settings: &Settings) -> Result<()> {
    let table = load_scheme(args.scheme.as_deref(), settings)?;
    let input = read_input(args.input.as_deref())?;
    let mut out = open_output(args.out.as_deref())?;
    match table.kind() {
        SchemeKind::Deterministic => {
            for line in input.lines() {
                writeln!(out, "{}", table.deromanize_deterministic(&nfc(line))?)?;
            }
        }
        SchemeKind::Natural => {
            let lm = load_lm(args.lm.as_deref(), settings)?;
            let fallback = match &args.fallback {
                Some(spec) => Some(load_scheme(Some(spec), settings)?),
                None => None,
            };
            let config = RescoreConfig { k: args.k, lambda: args.lambda };
            for line in input.lines() {
                let converted = translit::deromanize_with_lm(
                    &table,
                    &lm,
                    fallback.as_ref(),
                    &nfc(line),
                    config,
                )?;
                writeln!(out, "{converted}")?;
            }
        }
    }
    Ok(())
}

fn train_lm(args: TrainLmArgs) -> Result<()> {
    let input = read_input(args.input.as_deref())?;
    let lm: UnigramLm = UnigramLm::train(input.lines(), args.alpha)?;
    let mut out = open_output(args.out.as_deref())?;
    out.write_all(lm.to_tsv().as_bytes())?;
    Ok(())
}

fn fertility(args: FertilityArgs, settings: &Settings) -> Result<()> {
    let model = load_model(args.model.as_deref(), settings)?;
    let label = args
        .label
        .or_else(|| {
            args.input
                .as_deref()
                .and_then(Path::file_stem)
                .map(|s| s.to_string_lossy().into_owned())
        })
        .unwrap_or_else(|| "stdin".to_string());
    let input = read_input(args.input.as_deref())?;
    let entry = tokenizer::fertility::<f64, _, _>(&model, input.lines().map(nfc), &label)?;
    let report = romankit::FertilityReport { entries: vec![entry] };
    let mut out = open_output(args.out.as_deref())?;
    out.write_all(report.to_tsv().as_bytes())?;
    Ok(())
}

fn chrf(args: ChrfArgs) -> Result<()> {
    let params = ChrfParams {
        char_order: args.char_order,
        word_order: args.word_order,
        beta: args.beta,
        effective_order: !args.no_effective_order,
        remove_whitespace: !args.keep_whitespace,
        case_sensitive: !args.lowercase,
    };
    let input = read_input(args.batch.input.as_deref())?;
    let rows = metrics::parse_batch(&input)?;
    let mut out = open_output(args.batch.out.as_deref())?;
    let mut pairs = Vec::with_capacity(rows.len());
    for (id, hyp, refr) in &rows {
        writeln!(out, "{id}\t{:.4}", metrics::chrf(hyp, refr, &params))?;
        pairs.push((hyp.as_str(), refr.as_str()));
    }
    writeln!(out, "aggregate\t{:.4}", metrics::chrf_corpus(&pairs, &params))?;
    Ok(())
}

fn rouge(args: RougeArgs) -> Result<()> {
    let input = read_input(args.batch.input.as_deref())?;
    let rows = metrics::parse_batch(&input)?;
    let mut out = open_output(args.batch.out.as_deref())?;
    let (mut p_sum, mut r_sum, mut f_sum) = (0.0, 0.0, 0.0);
    for (id, hyp, refr) in &rows {
        let s: romankit::RougeScores = metrics::rouge_l_text(hyp, refr);
        writeln!(out, "{id}\t{:.4}\t{:.4}\t{:.4}", s.precision, s.recall, s.f1)?;
        p_sum += s.precision;
        r_sum += s.recall;
        f_sum += s.f1;
    }
    let n = rows.len().max(1) as f64;
    writeln!(out, "aggregate\t{:.4}\t{:.4}\t{:.4}", p_sum / n, r_sum / n, f_sum / n)?;
    Ok(())
}

fn embsim(args: EmbsimArgs) -> Result<()> {
    let a = EmbeddingSet::parse(&fs::read_to_string(&args.a)?)?;
    let b = EmbeddingSet::parse(&fs::read_to_string(&args.b)?)?;
    let (pairs, mean) = metrics::embedding_similarity(&a, &b)?;
    let mut out = open_output(args.out.as_deref())?;
    for (label, cos) in &pairs {
        writeln!(out, "{label}\t{cos:.6}")?;
    }
    writeln!(out, "mean\t{mean:.6}")?;
    Ok(())
}

fn prep_cpt(args: PrepCptArgs, settings: &Settings) -> Result<()> {
    let seed = settings.seed_announced();
    let native = pipeline::read_documents(io::BufReader::new(fs::File::open(&args.native)?))?;
    let english = pipeline::read_documents(io::BufReader::new(fs::File::open(&args.english)?))?;
    let scheme = match &args.scheme {
        Some(spec) => Some(load_scheme(Some(spec), settings)?),
        None => None,
    };
    let docs = pipeline::prep_cpt(native, english, scheme.as_ref(), seed)?;
    let mut out = open_output(args.out.as_deref())?;
    pipeline::write_jsonl(&mut out, &docs)?;
    Ok(())
}

fn prep_ift(args: PrepIftArgs, settings: &Settings) -> Result<()> {
    let seed = settings.seed_announced();
    let read = |p: &Path| -> Result<Vec<pipeline::IftExample>> {
        Ok(pipeline::read_ift_examples(io::BufReader::new(
            fs::File::open(p).with_context(|| format!("opening {}", p.display()))?,
        ))?)
    };
    let sources = IftSources {
        flan: read(&args.flan)?,
        dolly: read(&args.dolly)?,
        translation_en_xx: read(&args.trans_en_xx)?,
        translation_xx_en: read(&args.trans_xx_en)?,
    };
    let scheme = match &args.scheme {
        Some(spec) => Some(load_scheme(Some(spec), settings)?),
        None => None,
    };
    let spec = MixSpec {
        flan: args.counts[0],
        dolly: args.counts[1],
        translation_en_xx: args.counts[2],
        translation_xx_en: args.counts[3],
        seed,
        script_mode: if scheme.is_some() { ScriptMode::Romanized } else { ScriptMode::Native },
    };
    let examples = pipeline::prep_ift(&args.lang, sources, &spec, scheme.as_ref())?;
    let mut out = open_output(args.out.as_deref())?;
    for ex in &examples {
        let (text, offset) = pipeline::render_training_text(ex);
        let mut value = serde_json::to_value(ex)?;
        let map = value.as_object_mut().expect("record serializes to an object");
        map.insert("text".to_string(), serde_json::Value::String(text));
        map.insert("output_byte_offset".to_string(), serde_json::Value::from(offset));
        writeln!(out, "{}", serde_json::to_string(&value)?)?;
    }
    Ok(())
}

fn pack(args: PackArgs, settings: &Settings) -> Result<()> {
    let model = load_model(args.model.as_deref(), settings)?;
    let input = read_input(args.input.as_deref())?;
    let docs = pipeline::read_documents(io::Cursor::new(input))?;
    let sequences = pipeline::pack_sequences(
        &model,
        &docs,
        args.max_len,
        args.separator_id,
        args.drop_partial,
    )?;
    let mut data = BufWriter::new(fs::File::create(&args.out)?);
    let mut index = BufWriter::new(fs::File::create(&args.index)?);
    pipeline::write_packed(&mut data, &mut index, &sequences, args.max_len)?;
    let total: usize = sequences.iter().map(Vec::len).sum();
    eprintln!("packed {} sequences, {total} tokens", sequences.len());
    Ok(())
}

fn render_prompt(args: RenderPromptArgs, settings: &Settings) -> Result<()> {
    let seed = settings.seed_announced();
    let template = PromptTemplate::parse(&fs::read_to_string(&args.template)?)?;
    let examples = Example::read_jsonl(io::BufReader::new(fs::File::open(&args.task)?))?;
    let pool = match &args.shots {
        Some(p) => Example::read_jsonl(io::BufReader::new(fs::File::open(p)?))?,
        None => examples.clone(),
    };
    let query = examples
        .iter()
        .find(|e| e.id == args.query_id)
        .with_context(|| format!("no example with id `{}`", args.query_id))?;
    let task = TaskSpec {
        task: template.task.clone(),
        kind: TaskKind::Generation,
        options: Vec::new(),
        metric: MetricKind::Chrf,
        n_shots: args.n_shots,
        shot_pool: pool,
        seed,
    };
    // reuse the harness shot scheduling through a single-query run
    let backend = StubBackend::new();
    let report = evalharness::evaluate_task(
        &task,
        &template,
        std::slice::from_ref(query),
        &backend,
        None,
        None,
        &EvalConfig::default(),
    )?;
    let result = &report.examples[0];
    if let Some(err) = &result.error {
        bail!("{err}");
    }
    println!("{}", result.prompt);
    Ok(())
}

fn eval(args: EvalArgs, settings: &Settings) -> Result<()> {
    let seed = settings.seed_announced();
    let template = PromptTemplate::parse(&fs::read_to_string(&args.template)?)?;
    let examples = Example::read_jsonl(io::BufReader::new(fs::File::open(&args.task_file)?))?;
    let pool = match &args.shots {
        Some(p) => Example::read_jsonl(io::BufReader::new(fs::File::open(p)?))?,
        None => examples.clone(),
    };
    let kind = match args.kind.as_str() {
        "classification" => TaskKind::Classification,
        _ => TaskKind::Generation,
    };
    let metric = match args.metric.as_str() {
        "accuracy" => MetricKind::Accuracy,
        "f1" => MetricKind::F1,
        "rouge_l" => MetricKind::RougeL,
        _ => MetricKind::Chrf,
    };
    let task = TaskSpec {
        task: template.task.clone(),
        kind,
        options: args.options.clone(),
        metric,
        n_shots: args.n_shots,
        shot_pool: pool,
        seed,
    };
    let scheme = match &args.scheme {
        Some(spec) => Some(load_scheme(Some(spec), settings)?),
        None => None,
    };
    let lm = match &args.lm {
        Some(p) => Some(load_lm(Some(p), settings)?),
        None => None,
    };
    let config = EvalConfig {
        model_script: script_form(&args.model_script),
        eval_script: script_form(&args.eval_script),
        max_new_tokens: args.max_new_tokens,
        stop: if args.stop.is_empty() { vec!["\n\n".to_string()] } else { args.stop.clone() },
        space_before_option: !args.no_option_space,
        normalize_option_logprob: args.normalize_options,
        rescore: RescoreConfig::default(),
        jobs: settings.jobs,
    };

    let backend: Box<dyn CompletionBackend> = match args.backend.as_str() {
        "http" => {
            let url = args
                .url
                .clone()
                .or_else(|| settings.backend_url.clone())
                .context("http backend needs --url or `backend_url` in the config")?;
            Box::new(HttpBackend::new(HttpBackendConfig {
                url,
                token: settings.backend_token.clone(),
                timeout: std::time::Duration::from_secs(120),
            })?)
        }
        _ => {
            let answer_field = template.answer_field()?;
            let mut stub = StubBackend::new();
            for ex in &examples {
                let needle = evalharness::render_query(&template, ex)?;
                let answer = ex.fields.get(&answer_field).cloned().unwrap_or_default();
                let response = match (&scheme, args.echo_romanized) {
                    (Some(table), true) => table.romanize(&answer),
                    _ => answer,
                };
                stub = stub.complete_for_query(&needle, &response);
            }
            Box::new(stub)
        }
    };

    let report = evalharness::evaluate_task(
        &task,
        &template,
        &examples,
        backend.as_ref(),
        scheme.as_ref(),
        lm.as_ref(),
        &config,
    )?;
    if let Some(path) = &args.report {
        let mut out = BufWriter::new(fs::File::create(path)?);
        for ex in &report.examples {
            writeln!(out, "{}", serde_json::to_string(ex)?)?;
        }
    }
    print!("{}", report.aggregate_tsv());
    Ok(())
}

fn script_form(name: &str) -> ScriptForm {
    if name == "roman" {
        ScriptForm::Roman
    } else {
        ScriptForm::Native
    }
}

fn convert_model(args: ConvertModelArgs) -> Result<()> {
    let text = fs::read_to_string(&args.model)?;
    let model = BpeModel::from_json(&text)?;
    let mut out = open_output(args.out.as_deref())?;
    out.write_all(model.to_compact_json()?.as_bytes())?;
    Ok(())
}
