//! Client for an external text-completion service, plus the generated-text
//! substitution attacks built on it.
//!
//! Every request/response pair can be captured in a cassette file keyed by
//! the hex SHA-256 of the canonical JSON request body; replaying a cassette
//! reproduces a spectrum bit-for-bit without network access. The external
//! generator is the only non-deterministic piece of the pipeline, so the
//! capture is mandatory plumbing rather than an optimization.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::thread;
use std::time::Duration;

use serde_json::Value;

use textfray_core::gensub::{first_unit, normalize_quotes, ArticleUnits};
use textfray_core::spectrum::{SpectrumMode, SpliceOp};
use textfray_core::{Article, GenUnit, SeededRng, Spectrum};

use crate::error::{Error, Result};
use crate::hashing::sha256_hex;

/// Environment variable consulted when the endpoint carries no API key.
pub const API_KEY_ENV: &str = "TEXTFRAY_API_KEY";

/// A text-completion endpoint speaking `POST {base_url}/generate` with
/// body `{"text": seed}` and a JSON response carrying the generation under
/// `response_field` (a dot-separated path, `"output"` by default).
#[derive(Debug, Clone)]
pub struct GeneratorEndpoint {
    pub base_url: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    pub max_retries: u32,
    pub backoff_base: Duration,
    pub unit: GenUnit,
    pub response_field: String,
}

impl GeneratorEndpoint {
    pub fn new(base_url: impl Into<String>, unit: GenUnit) -> Self {
        Self {
            base_url: base_url.into(),
            api_key: None,
            timeout: Duration::from_secs(30),
            max_retries: 2,
            backoff_base: Duration::from_millis(100),
            unit,
            response_field: "output".into(),
        }
    }
}

/// Whether a cassette may fall through to the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CassetteMode {
    /// Misses hit the network and the response is recorded.
    Record,
    /// Misses are errors; fully offline.
    Replay,
}

/// Persistent request-hash -> generation map.
#[derive(Debug)]
pub struct Cassette {
    path: PathBuf,
    mode: CassetteMode,
    entries: BTreeMap<String, String>,
}

impl Cassette {
    /// Opens a cassette file. In replay mode the file must exist.
    pub fn open(path: impl Into<PathBuf>, mode: CassetteMode) -> Result<Self> {
        let path = path.into();
        let entries = match fs::read_to_string(&path) {
            Ok(raw) => serde_json::from_str(&raw).map_err(|e| Error::BadFile {
                path: path.clone(),
                message: e.to_string(),
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound && mode == CassetteMode::Record => {
                BTreeMap::new()
            }
            Err(e) => return Err(Error::io(&path, e)),
        };
        Ok(Self { path, mode, entries })
    }

    pub fn mode(&self) -> CassetteMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn get(&self, hash: &str) -> Option<&String> {
        self.entries.get(hash)
    }

    fn store(&mut self, hash: String, output: String) -> Result<()> {
        self.entries.insert(hash, output);
        let body = serde_json::to_string_pretty(&self.entries).expect("map serializes");
        fs::write(&self.path, body).map_err(|e| Error::io(&self.path, e))
    }
}

#[derive(serde::Serialize)]
struct GenerateRequest<'a> {
    text: &'a str,
}

/// The canonical request body and its cassette/cache key.
fn canonical_request(seed_text: &str) -> (String, String) {
    let body = serde_json::to_string(&GenerateRequest { text: seed_text })
        .expect("request serializes");
    let hash = sha256_hex(body.as_bytes());
    (body, hash)
}

/// A generator endpoint plus its HTTP client and optional cassette.
pub struct GeneratorClient {
    endpoint: GeneratorEndpoint,
    http: reqwest::blocking::Client,
    cassette: Option<Cassette>,
}

impl GeneratorClient {
    pub fn new(endpoint: GeneratorEndpoint) -> Result<Self> {
        let http = reqwest::blocking::Client::builder()
            .timeout(endpoint.timeout)
            .build()
            .map_err(|e| Error::Config(format!("http client: {e}")))?;
        Ok(Self { endpoint, http, cassette: None })
    }

    pub fn with_cassette(mut self, cassette: Cassette) -> Self {
        self.cassette = Some(cassette);
        self
    }

    pub fn endpoint(&self) -> &GeneratorEndpoint {
        &self.endpoint
    }

    /// Sends the seed text for completion and returns the raw generation.
    ///
    /// Network errors and 5xx responses are retried with exponential
    /// backoff up to `max_retries`; exhausting the retries is a transport
    /// error. Other non-2xx statuses fail immediately as protocol errors.
    pub fn complete(&mut self, seed_text: &str) -> Result<String> {
        if seed_text.is_empty() {
            return Err(Error::EmptySeed);
        }
        let (body, hash) = canonical_request(seed_text);
        if let Some(cassette) = &self.cassette {
            if let Some(output) = cassette.get(&hash) {
                return Ok(output.clone());
            }
            if cassette.mode() == CassetteMode::Replay {
                return Err(Error::CassetteMiss { hash });
            }
        }
        let output = self.complete_over_http(&body)?;
        if let Some(cassette) = &mut self.cassette {
            cassette.store(hash, output.clone())?;
        }
        Ok(output)
    }

    fn complete_over_http(&self, body: &str) -> Result<String> {
        let url = format!("{}/generate", self.endpoint.base_url.trim_end_matches('/'));
        let api_key = self
            .endpoint
            .api_key
            .clone()
            .or_else(|| std::env::var(API_KEY_ENV).ok());
        let attempts = self.endpoint.max_retries + 1;
        let mut last_failure = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                thread::sleep(self.endpoint.backoff_base * (1 << (attempt - 1)));
            }
            let mut request = self
                .http
                .post(&url)
                .header("content-type", "application/json")
                .body(body.to_string());
            if let Some(key) = &api_key {
                request = request.header("api-key", key);
            }
            match request.send() {
                Err(e) => last_failure = format!("request failed: {e}"),
                Ok(response) => {
                    let status = response.status();
                    let text = response.text().unwrap_or_default();
                    if status.is_success() {
                        return self.extract_output(&text);
                    }
                    if status.is_server_error() {
                        last_failure = format!("status {}: {}", status.as_u16(), text);
                    } else {
                        return Err(Error::Protocol { status: status.as_u16(), body: text });
                    }
                }
            }
        }
        Err(Error::Transport { attempts, message: last_failure })
    }

    fn extract_output(&self, response_body: &str) -> Result<String> {
        let value: Value = serde_json::from_str(response_body)
            .map_err(|e| Error::ResponseShape(format!("not JSON: {e}")))?;
        let mut cursor = &value;
        for key in self.endpoint.response_field.split('.') {
            cursor = cursor
                .get(key)
                .ok_or_else(|| Error::ResponseShape(format!("missing field {key:?}")))?;
        }
        let output = cursor
            .as_str()
            .ok_or_else(|| Error::ResponseShape("generation field is not a string".into()))?;
        if output.is_empty() {
            return Err(Error::EmptyGeneration);
        }
        Ok(output.to_string())
    }
}

/// Replaces the unit after `seed_index` with the first unit of the
/// (quote-normalized) generation seeded by the unit at `seed_index`.
pub fn substitute_generated(
    article: &Article,
    seed_index: usize,
    client: &mut GeneratorClient,
) -> Result<Article> {
    let mut units = ArticleUnits::from_article(article, client.endpoint().unit)?;
    if seed_index >= units.unit_count() {
        return Err(textfray_core::Error::UnitIndexOutOfRange {
            index: seed_index,
            units: units.unit_count(),
        }
        .into());
    }
    if seed_index + 1 >= units.unit_count() {
        return Err(textfray_core::Error::SeedAtEnd { index: seed_index }.into());
    }
    let seed_text = units.units()[seed_index].clone();
    let generation = client.complete(&seed_text)?;
    let replacement = first_unit(&normalize_quotes(&generation), client.endpoint().unit)
        .ok_or(Error::EmptyGeneration)?;
    units.replace_after(seed_index, &replacement)?;
    Ok(units.to_article())
}

/// Builds the generator-substitution spectrum: each step feeds one
/// seeded-random eligible unit to the generator and replaces the unit after
/// it, cumulatively, until no eligible seed remains. A generated unit is
/// never used as a seed and never replaced twice.
pub fn generator_spectrum(
    article: &Article,
    client: &mut GeneratorClient,
    rng: &mut SeededRng,
) -> Result<Spectrum> {
    let mut units = ArticleUnits::from_article(article, client.endpoint().unit)?;
    if units.unit_count() < 2 {
        return Err(Error::TooFewUnits { units: units.unit_count() });
    }
    let mode = match client.endpoint().unit {
        GenUnit::Sentence => SpectrumMode::GeneratorSentence,
        GenUnit::Paragraph => SpectrumMode::GeneratorParagraph,
    };
    let mut spectrum = Spectrum::new(mode, article.clone(), Some(rng.seed()));
    spectrum.push_variant(article.clone(), 0, 0.0)?;
    let mut step = 0usize;
    loop {
        let eligible = units.eligible_seeds();
        if eligible.is_empty() {
            break;
        }
        step += 1;
        let seed_index = eligible[rng.next_below(eligible.len())];
        let seed_text = units.units()[seed_index].clone();
        let generation = client.complete(&seed_text)?;
        let replacement = first_unit(&normalize_quotes(&generation), client.endpoint().unit)
            .ok_or(Error::EmptyGeneration)?;
        units.replace_after(seed_index, &replacement)?;
        spectrum.log_op(step, SpliceOp::ReplaceUnit { unit: seed_index + 1 });
        spectrum.push_variant(units.to_article(), step, units.fraction())?;
    }
    Ok(spectrum)
}
