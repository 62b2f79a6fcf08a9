//! Uniform classifier access: the remote wire protocol plus the two
//! built-in reference classifiers, behind one batch interface.
//!
//! Wire protocol (bit-exact):
//! request  `{"articles": [{"article": body, "title": t, "authors": "a, b",
//!            "domain": d, "date": dt}, ...]}`
//! response `{"results": [{"p_machine": f, "p_human": f}, ...]}`
//!
//! Remote verdicts are cached under the hex SHA-256 of the canonical
//! single-article request JSON, so re-runs of an experiment cost nothing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use textfray_core::{lexical_stub, provenance_oracle, Article, Verdict};

use crate::error::{Error, Result};
use crate::hashing::sha256_hex;

/// Environment variable overriding a remote endpoint URL.
pub const CLASSIFIER_URL_ENV: &str = "TEXTFRAY_CLASSIFIER_URL";

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct WireArticle {
    pub article: String,
    pub title: String,
    pub authors: String,
    pub domain: String,
    pub date: String,
}

impl WireArticle {
    /// The full five-field request item; authors joined to one string.
    pub fn from_article(article: &Article) -> Self {
        Self {
            article: article.body.clone(),
            title: article.title.clone(),
            authors: article.authors.join(", "),
            domain: article.domain.clone(),
            date: article.date.clone(),
        }
    }
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct ClassifyRequest {
    pub articles: Vec<WireArticle>,
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct WireResult {
    pub p_machine: f64,
    pub p_human: f64,
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct ClassifyResponse {
    pub results: Vec<WireResult>,
}

/// Which classifier a campaign talks to.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierConfig {
    Remote {
        base_url: String,
        #[serde(default = "default_batch_size")]
        batch_size: usize,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
        #[serde(default)]
        cache: Option<PathBuf>,
    },
    ProvenanceOracle,
    LexicalStub,
}

fn default_batch_size() -> usize {
    8
}

fn default_timeout_ms() -> u64 {
    30_000
}

#[derive(Debug, Default)]
struct VerdictCache {
    path: PathBuf,
    entries: BTreeMap<String, (f64, f64)>,
}

impl VerdictCache {
    fn open(path: &Path) -> Result<Self> {
        let entries = match fs::read_to_string(path) {
            Ok(raw) => {
                let map: BTreeMap<String, WireResult> =
                    serde_json::from_str(&raw).map_err(|e| Error::BadFile {
                        path: path.to_path_buf(),
                        message: e.to_string(),
                    })?;
                map.into_iter().map(|(k, v)| (k, (v.p_machine, v.p_human))).collect()
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(Error::io(path, e)),
        };
        Ok(Self { path: path.to_path_buf(), entries })
    }

    fn persist(&self) -> Result<()> {
        let map: BTreeMap<&String, WireResult> = self
            .entries
            .iter()
            .map(|(k, &(p_machine, p_human))| (k, WireResult { p_machine, p_human }))
            .collect();
        let body = serde_json::to_string_pretty(&map).expect("cache serializes");
        fs::write(&self.path, body).map_err(|e| Error::io(&self.path, e))
    }
}

/// A classifier endpoint ready to take batches.
pub struct Classifier {
    config: ClassifierConfig,
    http: Option<reqwest::blocking::Client>,
    cache: Option<VerdictCache>,
    remote_calls: u64,
}

impl Classifier {
    /// Builds a classifier. For remote endpoints the URL may be overridden
    /// via `TEXTFRAY_CLASSIFIER_URL`, and the verdict cache is loaded when
    /// a cache path is configured.
    pub fn new(config: ClassifierConfig) -> Result<Self> {
        let mut config = config;
        let mut http = None;
        let mut cache = None;
        if let ClassifierConfig::Remote { base_url, batch_size, timeout_ms, cache: cache_path } =
            &mut config
        {
            if *batch_size == 0 {
                return Err(Error::Config("batch_size must be at least 1".into()));
            }
            if let Ok(url) = std::env::var(CLASSIFIER_URL_ENV) {
                *base_url = url;
            }
            http = Some(
                reqwest::blocking::Client::builder()
                    .timeout(Duration::from_millis(*timeout_ms))
                    .build()
                    .map_err(|e| Error::Config(format!("http client: {e}")))?,
            );
            if let Some(path) = cache_path {
                cache = Some(VerdictCache::open(path)?);
            }
        }
        Ok(Self { config, http, cache, remote_calls: 0 })
    }

    /// Remote HTTP requests issued so far (cache hits excluded).
    pub fn remote_calls(&self) -> u64 {
        self.remote_calls
    }

    pub fn classify_one(&mut self, article: &Article) -> Result<Verdict> {
        self.classify_batch(std::slice::from_ref(article))
            .pop()
            .expect("one result per article")
    }

    /// Classifies in order, consulting the cache per item and chunking
    /// remote requests by `batch_size`. A failed chunk fails its own items
    /// only; the batch always returns one result per input.
    pub fn classify_batch(&mut self, articles: &[Article]) -> Vec<Result<Verdict>> {
        match &self.config {
            ClassifierConfig::ProvenanceOracle => articles
                .iter()
                .map(|a| provenance_oracle(a).map_err(Error::from))
                .collect(),
            ClassifierConfig::LexicalStub => articles
                .iter()
                .map(|a| lexical_stub(a).map_err(Error::from))
                .collect(),
            ClassifierConfig::Remote { base_url, batch_size, .. } => {
                let (base_url, batch_size) = (base_url.clone(), *batch_size);
                self.classify_remote(articles, &base_url, batch_size)
            }
        }
    }

    fn classify_remote(
        &mut self,
        articles: &[Article],
        base_url: &str,
        batch_size: usize,
    ) -> Vec<Result<Verdict>> {
        let mut results: Vec<Option<Result<Verdict>>> = Vec::new();
        let mut misses: Vec<(usize, WireArticle, String)> = Vec::new();
        for (index, article) in articles.iter().enumerate() {
            if article.body.trim().is_empty() {
                results.push(Some(Err(textfray_core::Error::EmptyBody.into())));
                continue;
            }
            let wire = WireArticle::from_article(article);
            let key = sha256_hex(
                serde_json::to_string(&wire).expect("wire serializes").as_bytes(),
            );
            let cached = self
                .cache
                .as_ref()
                .and_then(|c| c.entries.get(&key))
                .map(|&(p_machine, p_human)| Verdict::from_pair(p_machine, p_human));
            match cached {
                Some(verdict) => results.push(Some(verdict.map_err(Error::from))),
                None => {
                    results.push(None);
                    misses.push((index, wire, key));
                }
            }
        }

        let mut cache_dirty = false;
        for chunk in misses.chunks(batch_size) {
            let request = ClassifyRequest {
                articles: chunk.iter().map(|(_, wire, _)| wire.clone()).collect(),
            };
            match self.send_classify(base_url, &request) {
                Ok(response) if response.results.len() == chunk.len() => {
                    for ((index, _, key), result) in chunk.iter().zip(response.results) {
                        let verdict = Verdict::from_pair(result.p_machine, result.p_human)
                            .map_err(Error::from);
                        if verdict.is_ok() {
                            if let Some(cache) = &mut self.cache {
                                cache
                                    .entries
                                    .insert(key.clone(), (result.p_machine, result.p_human));
                                cache_dirty = true;
                            }
                        }
                        results[*index] = Some(verdict);
                    }
                }
                Ok(response) => {
                    for (index, _, _) in chunk {
                        results[*index] = Some(Err(Error::ResponseShape(format!(
                            "{} results for {} articles",
                            response.results.len(),
                            chunk.len()
                        ))));
                    }
                }
                Err(failure) => {
                    let message = failure.to_string();
                    for (index, _, _) in chunk {
                        results[*index] =
                            Some(Err(Error::Transport { attempts: 1, message: message.clone() }));
                    }
                }
            }
        }
        if cache_dirty {
            if let Some(cache) = &self.cache {
                if let Err(e) = cache.persist() {
                    log::warn!("verdict cache not persisted: {e}");
                }
            }
        }
        results.into_iter().map(|r| r.expect("every slot filled")).collect()
    }

    fn send_classify(&mut self, base_url: &str, request: &ClassifyRequest) -> Result<ClassifyResponse> {
        let url = format!("{}/classify", base_url.trim_end_matches('/'));
        let body = serde_json::to_string(request).expect("request serializes");
        self.remote_calls += 1;
        let response = self
            .http
            .as_ref()
            .expect("remote classifier has a client")
            .post(&url)
            .header("content-type", "application/json")
            .body(body)
            .send()
            .map_err(|e| Error::Transport { attempts: 1, message: e.to_string() })?;
        let status = response.status();
        let text = response.text().unwrap_or_default();
        if !status.is_success() {
            return Err(Error::Protocol { status: status.as_u16(), body: text });
        }
        serde_json::from_str(&text).map_err(|e| Error::ResponseShape(e.to_string()))
    }
}
