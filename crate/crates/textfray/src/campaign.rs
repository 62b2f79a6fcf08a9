//! Campaign orchestration: run attack campaigns from a JSON config,
//! classify every variant, derive metrics, and persist everything needed
//! to reproduce the run bit-for-bit with the built-in classifiers.
//!
//! Artifacts, all under the configured output directory:
//! - `spectra/<id>.jsonl` — one variant per line (corpus schema)
//! - `spectra/<id>.manifest.json` — mode, seed, ids, per-variant
//!   step/fraction, and the splice log
//! - `spectra_index.json` — the spectra of this campaign, in order
//! - `curves.csv` — `spectrum_id,step,fraction,p_machine,p_human,label`
//! - `metrics.json` — flip point, undetected substitution percentage, and
//!   hesitation count per spectrum
//! - `campaign_manifest.json` — config echo, seed, input/output hashes
//!   (written by `run`)

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Value};

use textfray_core::blend::{insert_spectrum, length_sweep, position_sweep, substitute_spectrum};
use textfray_core::lexical::{synonym_spectrum, subjectivity_ordered_insertion, SubjectivityOrder};
use textfray_core::metrics::{flip_point, hesitation_count, usp, ConfidenceCurve, CurvePoint};
use textfray_core::spectrum::{SpliceEvent, SpliceOp};
use textfray_core::{derive_seed, Article, GenUnit, SeededRng, Spectrum};

use crate::classifier::{Classifier, ClassifierConfig};
use crate::error::{Error, Result};
use crate::genclient::{Cassette, CassetteMode, GeneratorClient, GeneratorEndpoint};
use crate::hashing::sha256_hex;
use crate::jsonl::{article_to_json, load_jsonl, AuthorsAs, BodyKey};
use crate::lexfile::{load_subjectivity_lexicon, load_synonym_lexicon};

pub const CURVES_FILE: &str = "curves.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const INDEX_FILE: &str = "spectra_index.json";
pub const MANIFEST_FILE: &str = "campaign_manifest.json";

/// Insertion order for the subjectivity mode, as spelled in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderConfig {
    Asc,
    Desc,
}

/// HTTP generator settings for the generator modes.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorHttpConfig {
    pub base_url: String,
    #[serde(default)]
    pub api_key: Option<String>,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff_ms")]
    pub backoff_ms: u64,
    #[serde(default = "default_response_field")]
    pub response_field: String,
    #[serde(default)]
    pub cassette: Option<PathBuf>,
    #[serde(default = "default_cassette_mode")]
    pub cassette_mode: CassetteMode,
}

fn default_timeout_ms() -> u64 {
    30_000
}
fn default_max_retries() -> u32 {
    2
}
fn default_backoff_ms() -> u64 {
    100
}
fn default_response_field() -> String {
    "output".into()
}
fn default_cassette_mode() -> CassetteMode {
    CassetteMode::Record
}

/// The attack a campaign runs, with its mode-specific parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeConfig {
    Substitute,
    Insert,
    Position { sentence: String },
    Length,
    Synonym { lexicon: PathBuf },
    Subjectivity { lexicon: PathBuf, order: OrderConfig },
    GeneratorSentence { generator: GeneratorHttpConfig },
    GeneratorParagraph { generator: GeneratorHttpConfig },
}

impl ModeConfig {
    fn needs_sources(&self) -> bool {
        matches!(
            self,
            ModeConfig::Substitute | ModeConfig::Insert | ModeConfig::Subjectivity { .. }
        )
    }

    fn mode_name(&self) -> &'static str {
        match self {
            ModeConfig::Substitute => "substitute",
            ModeConfig::Insert => "insert",
            ModeConfig::Position { .. } => "position",
            ModeConfig::Length => "length",
            ModeConfig::Synonym { .. } => "synonym",
            ModeConfig::Subjectivity { order: OrderConfig::Asc, .. } => "subjectivity_asc",
            ModeConfig::Subjectivity { order: OrderConfig::Desc, .. } => "subjectivity_desc",
            ModeConfig::GeneratorSentence { .. } => "generator_sentence",
            ModeConfig::GeneratorParagraph { .. } => "generator_paragraph",
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub targets: PathBuf,
    #[serde(default)]
    pub sources: Option<PathBuf>,
    pub mode: ModeConfig,
    pub classifier: ClassifierConfig,
    pub output_dir: PathBuf,
    #[serde(default = "default_threshold")]
    pub decision_threshold: f64,
    #[serde(default = "default_body_key")]
    pub body_key: BodyKey,
    #[serde(default = "default_authors_as")]
    pub authors_as: AuthorsAs,
}

fn default_threshold() -> f64 {
    0.5
}
fn default_body_key() -> BodyKey {
    BodyKey::Article
}
fn default_authors_as() -> AuthorsAs {
    AuthorsAs::List
}

/// Parses and validates a campaign config; referenced input paths must
/// exist at load time.
pub fn load_config(path: impl AsRef<Path>) -> Result<CampaignConfig> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let config: CampaignConfig = serde_json::from_str(&raw).map_err(|e| Error::BadFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    validate_config(&config)?;
    Ok(config)
}

pub fn validate_config(config: &CampaignConfig) -> Result<()> {
    if !(0.0..=1.0).contains(&config.decision_threshold) {
        return Err(Error::Config(format!(
            "decision_threshold {} outside [0, 1]",
            config.decision_threshold
        )));
    }
    let mut required: Vec<&Path> = vec![&config.targets];
    if config.mode.needs_sources() {
        let sources = config
            .sources
            .as_deref()
            .ok_or_else(|| Error::Config(format!("mode {} needs sources", config.mode.mode_name())))?;
        required.push(sources);
    } else if let Some(sources) = config.sources.as_deref() {
        required.push(sources);
    }
    match &config.mode {
        ModeConfig::Synonym { lexicon } | ModeConfig::Subjectivity { lexicon, .. } => {
            required.push(lexicon);
        }
        ModeConfig::Position { sentence } => {
            if sentence.trim().is_empty() {
                return Err(Error::Config("position mode needs a non-empty sentence".into()));
            }
        }
        ModeConfig::GeneratorSentence { generator } | ModeConfig::GeneratorParagraph { generator } => {
            if generator.cassette_mode == CassetteMode::Replay {
                let cassette = generator.cassette.as_deref().ok_or_else(|| {
                    Error::Config("replay cassette mode needs a cassette path".into())
                })?;
                required.push(cassette);
            }
        }
        _ => {}
    }
    for path in required {
        if !path.exists() {
            return Err(Error::Config(format!("referenced path {} does not exist", path.display())));
        }
    }
    Ok(())
}

/// One spectrum that could not be produced or classified; campaigns carry
/// on past these.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectrumFailure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Default)]
pub struct CampaignOutcome {
    pub completed: Vec<String>,
    pub failed: Vec<SpectrumFailure>,
}

impl CampaignOutcome {
    pub fn all_completed(&self) -> bool {
        self.failed.is_empty()
    }

    fn record(&mut self, id: String, result: std::result::Result<(), Error>) {
        match result {
            Ok(()) => self.completed.push(id),
            Err(e) => {
                log::error!("spectrum {id} failed: {e}");
                self.failed.push(SpectrumFailure { id, error: e.to_string() });
            }
        }
    }
}

fn spectrum_id(index: usize, mode: &ModeConfig) -> String {
    format!("s{index:04}-{}", mode.mode_name())
}

struct GeneratorSetup {
    client: GeneratorClient,
}

fn generator_setup(config: &GeneratorHttpConfig, unit: GenUnit) -> Result<GeneratorSetup> {
    let mut endpoint = GeneratorEndpoint::new(config.base_url.clone(), unit);
    endpoint.api_key = config.api_key.clone();
    endpoint.timeout = Duration::from_millis(config.timeout_ms);
    endpoint.max_retries = config.max_retries;
    endpoint.backoff_base = Duration::from_millis(config.backoff_ms);
    endpoint.response_field = config.response_field.clone();
    let mut client = GeneratorClient::new(endpoint)?;
    if let Some(path) = &config.cassette {
        client = client.with_cassette(Cassette::open(path, config.cassette_mode)?);
    }
    Ok(GeneratorSetup { client })
}

/// Builds every spectrum of the campaign and writes the variants, the
/// per-spectrum manifests, and the index.
pub fn cmd_generate(config: &CampaignConfig) -> Result<CampaignOutcome> {
    validate_config(config)?;
    let targets = load_jsonl(&config.targets)?;
    let sources = match &config.sources {
        Some(path) => load_jsonl(path)?,
        None => Vec::new(),
    };
    if config.mode.needs_sources() && sources.is_empty() {
        return Err(Error::Config("sources corpus is empty".into()));
    }

    let synonyms = match &config.mode {
        ModeConfig::Synonym { lexicon } => Some(load_synonym_lexicon(lexicon)?),
        _ => None,
    };
    let subjectivity = match &config.mode {
        ModeConfig::Subjectivity { lexicon, .. } => Some(load_subjectivity_lexicon(lexicon)?),
        _ => None,
    };
    let mut generator = match &config.mode {
        ModeConfig::GeneratorSentence { generator } => {
            Some(generator_setup(generator, GenUnit::Sentence)?)
        }
        ModeConfig::GeneratorParagraph { generator } => {
            Some(generator_setup(generator, GenUnit::Paragraph)?)
        }
        _ => None,
    };

    let spectra_dir = config.output_dir.join("spectra");
    fs::create_dir_all(&spectra_dir).map_err(|e| Error::io(&spectra_dir, e))?;

    let mut outcome = CampaignOutcome::default();
    let mut index_entries = Vec::new();
    for (i, target) in targets.iter().enumerate() {
        let id = spectrum_id(i, &config.mode);
        let seed = derive_seed(config.seed, i as u64);
        let source = if sources.is_empty() { None } else { Some(&sources[i % sources.len()]) };
        let built = build_spectrum(config, target, source, seed, &synonyms, &subjectivity, &mut generator);
        let result = built.and_then(|spectrum| {
            write_spectrum(config, &spectra_dir, &id, &spectrum, i, source.map(|_| i % sources.len()))
        });
        if result.is_ok() {
            index_entries.push(json!({
                "id": id,
                "variants": format!("spectra/{id}.jsonl"),
                "manifest": format!("spectra/{id}.manifest.json"),
            }));
        }
        outcome.record(id, result);
    }

    let index = json!({ "version": 1, "spectra": index_entries });
    let index_path = config.output_dir.join(INDEX_FILE);
    fs::write(&index_path, pretty(&index)).map_err(|e| Error::io(&index_path, e))?;
    Ok(outcome)
}

#[allow(clippy::too_many_arguments)]
fn build_spectrum(
    config: &CampaignConfig,
    target: &Article,
    source: Option<&Article>,
    seed: u64,
    synonyms: &Option<textfray_core::lexical::SynonymLexicon>,
    subjectivity: &Option<textfray_core::lexical::SubjectivityLexicon>,
    generator: &mut Option<GeneratorSetup>,
) -> Result<Spectrum> {
    let mut rng = SeededRng::new(seed);
    let spectrum = match &config.mode {
        ModeConfig::Substitute => {
            substitute_spectrum(target, source.expect("validated"), &mut rng)?
        }
        ModeConfig::Insert => insert_spectrum(target, source.expect("validated"), &mut rng)?,
        ModeConfig::Position { sentence } => position_sweep(target, sentence)?,
        ModeConfig::Length => length_sweep(target)?,
        ModeConfig::Synonym { .. } => {
            synonym_spectrum(target, synonyms.as_ref().expect("loaded"), &mut rng)?
        }
        ModeConfig::Subjectivity { order, .. } => {
            let order = match order {
                OrderConfig::Asc => SubjectivityOrder::Asc,
                OrderConfig::Desc => SubjectivityOrder::Desc,
            };
            subjectivity_ordered_insertion(
                target,
                source.expect("validated"),
                subjectivity.as_ref().expect("loaded"),
                order,
                seed,
            )?
        }
        ModeConfig::GeneratorSentence { .. } | ModeConfig::GeneratorParagraph { .. } => {
            let setup = generator.as_mut().expect("constructed");
            crate::genclient::generator_spectrum(target, &mut setup.client, &mut rng)?
        }
    };
    Ok(spectrum)
}

fn splice_op_json(op: &SpliceOp) -> Value {
    match op {
        SpliceOp::ReplaceSentence { target_slot, source_index } => json!({
            "kind": "replace_sentence", "target_slot": target_slot, "source_index": source_index,
        }),
        SpliceOp::InsertSentence { gap, source_index } => json!({
            "kind": "insert_sentence", "gap": gap, "source_index": source_index,
        }),
        SpliceOp::InsertAt { gap } => json!({ "kind": "insert_at", "gap": gap }),
        SpliceOp::TruncateTo { sentences } => {
            json!({ "kind": "truncate_to", "sentences": sentences })
        }
        SpliceOp::SwapWord { position, from, to } => json!({
            "kind": "swap_word", "position": position, "from": from, "to": to,
        }),
        SpliceOp::ReplaceUnit { unit } => json!({ "kind": "replace_unit", "unit": unit }),
    }
}

fn splice_log_json(log: &[SpliceEvent]) -> Value {
    Value::Array(
        log.iter()
            .map(|e| json!({ "step": e.step, "op": splice_op_json(&e.op) }))
            .collect(),
    )
}

fn write_spectrum(
    config: &CampaignConfig,
    spectra_dir: &Path,
    id: &str,
    spectrum: &Spectrum,
    target_index: usize,
    source_index: Option<usize>,
) -> Result<()> {
    let variants_path = spectra_dir.join(format!("{id}.jsonl"));
    let mut lines = String::new();
    for variant in spectrum.variants() {
        let value = article_to_json(&variant.article, config.body_key, config.authors_as);
        lines.push_str(&value.to_string());
        lines.push('\n');
    }
    fs::write(&variants_path, lines).map_err(|e| Error::io(&variants_path, e))?;

    let manifest = json!({
        "version": 1,
        "spectrum_id": id,
        "mode": spectrum.mode().as_str(),
        "seed": spectrum.seed(),
        "base": { "index": target_index, "title": spectrum.base().title },
        "source": source_index.map(|i| json!({ "index": i })),
        "variants": spectrum
            .variants()
            .iter()
            .map(|v| json!({ "step": v.step, "fraction": v.fraction }))
            .collect::<Vec<_>>(),
        "splice_log": splice_log_json(spectrum.splice_log()),
    });
    let manifest_path = spectra_dir.join(format!("{id}.manifest.json"));
    fs::write(&manifest_path, pretty(&manifest)).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(())
}

#[derive(Debug, serde::Deserialize)]
struct IndexEntry {
    id: String,
    variants: String,
    manifest: String,
}

#[derive(Debug, serde::Deserialize)]
struct SpectraIndex {
    #[allow(dead_code)]
    version: u32,
    spectra: Vec<IndexEntry>,
}

fn load_index(config: &CampaignConfig) -> Result<SpectraIndex> {
    let path = config.output_dir.join(INDEX_FILE);
    let raw = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&raw).map_err(|e| Error::BadFile { path, message: e.to_string() })
}

#[derive(Debug, serde::Deserialize)]
struct ManifestVariant {
    step: usize,
    fraction: f64,
}

fn load_manifest_variants(path: &Path) -> Result<Vec<ManifestVariant>> {
    #[derive(serde::Deserialize)]
    struct Manifest {
        variants: Vec<ManifestVariant>,
    }
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: Manifest = serde_json::from_str(&raw).map_err(|e| Error::BadFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(manifest.variants)
}

/// Classifies every generated spectrum and writes the curve CSV.
pub fn cmd_classify(config: &CampaignConfig) -> Result<CampaignOutcome> {
    let index = load_index(config)?;
    let mut classifier = Classifier::new(config.classifier.clone())?;
    let mut outcome = CampaignOutcome::default();
    let mut csv = String::from("spectrum_id,step,fraction,p_machine,p_human,label\n");
    for entry in &index.spectra {
        let result = classify_spectrum(config, &mut classifier, entry, &mut csv);
        outcome.record(entry.id.clone(), result);
    }
    let path = config.output_dir.join(CURVES_FILE);
    fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    Ok(outcome)
}

fn classify_spectrum(
    config: &CampaignConfig,
    classifier: &mut Classifier,
    entry: &IndexEntry,
    csv: &mut String,
) -> Result<()> {
    let variants_path = config.output_dir.join(&entry.variants);
    let manifest_path = config.output_dir.join(&entry.manifest);
    let articles = load_jsonl(&variants_path)?;
    let steps = load_manifest_variants(&manifest_path)?;
    if articles.len() != steps.len() {
        return Err(Error::BadFile {
            path: manifest_path,
            message: format!(
                "{} variants on disk but {} manifest entries",
                articles.len(),
                steps.len()
            ),
        });
    }
    let mut rows = String::new();
    for (article, meta) in articles.iter().zip(&steps) {
        let verdict = classifier.classify_one(article)?;
        rows.push_str(&format!(
            "{},{},{},{},{},{}\n",
            entry.id,
            meta.step,
            meta.fraction,
            verdict.p_machine,
            verdict.p_human,
            verdict.label.as_str()
        ));
    }
    csv.push_str(&rows);
    Ok(())
}

/// One parsed row of `curves.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub spectrum_id: String,
    pub step: usize,
    pub fraction: f64,
    pub p_machine: f64,
    pub p_human: f64,
    pub label: String,
}

/// Reads the curve CSV back (the schema is pinned by this crate, fields
/// never contain commas).
pub fn load_curves(path: impl AsRef<Path>) -> Result<Vec<CurveRow>> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, message: String| Error::BadRecord {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rows = Vec::new();
    for (i, line) in raw.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(bad(i + 1, format!("expected 6 fields, got {}", fields.len())));
        }
        rows.push(CurveRow {
            spectrum_id: fields[0].to_string(),
            step: fields[1].parse().map_err(|e| bad(i + 1, format!("step: {e}")))?,
            fraction: fields[2].parse().map_err(|e| bad(i + 1, format!("fraction: {e}")))?,
            p_machine: fields[3].parse().map_err(|e| bad(i + 1, format!("p_machine: {e}")))?,
            p_human: fields[4].parse().map_err(|e| bad(i + 1, format!("p_human: {e}")))?,
            label: fields[5].to_string(),
        });
    }
    Ok(rows)
}

/// Computes the per-spectrum metrics from the curve CSV and writes
/// `metrics.json`.
pub fn cmd_measure(config: &CampaignConfig) -> Result<()> {
    let rows = load_curves(config.output_dir.join(CURVES_FILE))?;
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, ConfidenceCurve> = BTreeMap::new();
    for row in rows {
        if !grouped.contains_key(&row.spectrum_id) {
            order.push(row.spectrum_id.clone());
            grouped.insert(row.spectrum_id.clone(), ConfidenceCurve::new(row.spectrum_id.clone()));
        }
        grouped
            .get_mut(&row.spectrum_id)
            .expect("just inserted")
            .push(CurvePoint { step: row.step, fraction: row.fraction, p_machine: row.p_machine })?;
    }
    let threshold = config.decision_threshold;
    let spectra: Vec<Value> = order
        .iter()
        .map(|id| {
            let curve = &grouped[id];
            json!({
                "spectrum_id": id,
                "points": curve.points().len(),
                "final_step": curve.points().last().map(|p| p.step),
                "flip_point": flip_point(curve, threshold),
                "usp": usp(curve, threshold),
                "hesitation_count": hesitation_count(curve, threshold),
            })
        })
        .collect();
    let metrics = json!({
        "version": 1,
        "decision_threshold": threshold,
        "spectra": spectra,
    });
    let path = config.output_dir.join(METRICS_FILE);
    fs::write(&path, pretty(&metrics)).map_err(|e| Error::io(&path, e))?;
    Ok(())
}

/// The full pipeline: generate, classify, measure, then write the campaign
/// manifest with content hashes of all inputs and outputs.
pub fn cmd_run(config: &CampaignConfig) -> Result<CampaignOutcome> {
    let mut outcome = cmd_generate(config)?;
    let classify_outcome = cmd_classify(config)?;
    outcome.failed.extend(classify_outcome.failed);
    outcome.completed.retain(|id| classify_outcome.completed.contains(id));
    cmd_measure(config)?;
    write_campaign_manifest(config, &outcome)?;
    Ok(outcome)
}

fn hash_file(path: &Path) -> Result<String> {
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&data))
}

fn write_campaign_manifest(config: &CampaignConfig, outcome: &CampaignOutcome) -> Result<()> {
    let mut inputs = BTreeMap::new();
    let mut input_paths: Vec<&Path> = vec![&config.targets];
    if let Some(sources) = &config.sources {
        input_paths.push(sources);
    }
    match &config.mode {
        ModeConfig::Synonym { lexicon } | ModeConfig::Subjectivity { lexicon, .. } => {
            input_paths.push(lexicon);
        }
        ModeConfig::GeneratorSentence { generator } | ModeConfig::GeneratorParagraph { generator } => {
            if let Some(cassette) = &generator.cassette {
                if cassette.exists() {
                    input_paths.push(cassette);
                }
            }
        }
        _ => {}
    }
    for path in input_paths {
        inputs.insert(path.display().to_string(), hash_file(path)?);
    }

    let mut outputs = BTreeMap::new();
    let index = load_index(config)?;
    let mut output_files: Vec<String> =
        vec![CURVES_FILE.into(), METRICS_FILE.into(), INDEX_FILE.into()];
    for entry in &index.spectra {
        output_files.push(entry.variants.clone());
        output_files.push(entry.manifest.clone());
    }
    for rel in output_files {
        let path = config.output_dir.join(&rel);
        if path.exists() {
            outputs.insert(rel, hash_file(&path)?);
        }
    }

    let manifest = json!({
        "version": 1,
        "seed": config.seed,
        "decision_threshold": config.decision_threshold,
        "config": serde_json::to_value(config).expect("config serializes"),
        "inputs": inputs,
        "outputs": outputs,
        "completed": outcome.completed,
        "failed": outcome.failed,
    });
    let path = config.output_dir.join(MANIFEST_FILE);
    fs::write(&path, pretty(&manifest)).map_err(|e| Error::io(&path, e))?;
    Ok(())
}

fn pretty(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json serializes");
    out.push('\n');
    out
}
