//! Bundled stub services: a deterministic echo generator and a
//! lexical-stub classifier speaking the exact wire protocols. They back
//! the protocol conformance tests and give users something to point the
//! CLI at before wiring a real service.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use textfray_core::{lexical_stub, Article, Label};

use crate::classifier::{ClassifyRequest, ClassifyResponse, WireResult};
use crate::error::{Error, Result};

/// What a stub serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StubKind {
    /// `POST /generate` answering `{"output": "GEN: " + text}`.
    Generator,
    /// `POST /classify` answering lexical-stub verdicts.
    Classifier,
}

struct StubState {
    kind: StubKind,
    hits: AtomicUsize,
    fail_remaining: AtomicUsize,
    requests: Mutex<Vec<String>>,
}

/// An in-process stub service on an ephemeral port.
pub struct StubServer {
    url: String,
    state: Arc<StubState>,
    stop: Arc<AtomicBool>,
    worker: Option<JoinHandle<()>>,
}

impl StubServer {
    /// Spawns a stub on `127.0.0.1:0`. The first `fail_first` requests
    /// answer 500, exercising retry paths.
    pub fn spawn(kind: StubKind, fail_first: usize) -> Result<Self> {
        let server = tiny_http::Server::http("127.0.0.1:0")
            .map_err(|e| Error::Config(format!("stub bind: {e}")))?;
        let addr = server.server_addr();
        let state = Arc::new(StubState {
            kind,
            hits: AtomicUsize::new(0),
            fail_remaining: AtomicUsize::new(fail_first),
            requests: Mutex::new(Vec::new()),
        });
        let stop = Arc::new(AtomicBool::new(false));
        let worker = {
            let state = Arc::clone(&state);
            let stop = Arc::clone(&stop);
            std::thread::spawn(move || {
                while !stop.load(Ordering::SeqCst) {
                    match server.recv_timeout(Duration::from_millis(25)) {
                        Ok(Some(request)) => handle(request, &state),
                        Ok(None) => {}
                        Err(_) => break,
                    }
                }
            })
        };
        Ok(Self { url: format!("http://{addr}"), state, stop, worker: Some(worker) })
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    /// Requests received so far.
    pub fn hits(&self) -> usize {
        self.state.hits.load(Ordering::SeqCst)
    }

    /// Raw request bodies in arrival order.
    pub fn raw_requests(&self) -> Vec<String> {
        self.state.requests.lock().expect("stub lock").clone()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}

fn handle(mut request: tiny_http::Request, state: &StubState) {
    state.hits.fetch_add(1, Ordering::SeqCst);
    let mut body = String::new();
    let _ = request.as_reader().read_to_string(&mut body);
    state.requests.lock().expect("stub lock").push(body.clone());

    if state.fail_remaining.load(Ordering::SeqCst) > 0 {
        state.fail_remaining.fetch_sub(1, Ordering::SeqCst);
        respond(request, 500, r#"{"error": "injected failure"}"#);
        return;
    }
    let (expected_path, payload) = match state.kind {
        StubKind::Generator => ("/generate", generator_payload(&body)),
        StubKind::Classifier => ("/classify", classifier_payload(&body)),
    };
    if request.method() != &tiny_http::Method::Post || request.url() != expected_path {
        respond(request, 404, r#"{"error": "not found"}"#);
        return;
    }
    match payload {
        Ok(json) => respond(request, 200, &json),
        Err(message) => respond(request, 400, &format!(r#"{{"error": {message:?}}}"#)),
    }
}

fn generator_payload(body: &str) -> std::result::Result<String, String> {
    #[derive(serde::Deserialize)]
    struct GenerateRequest {
        text: String,
    }
    let request: GenerateRequest =
        serde_json::from_str(body).map_err(|e| format!("bad request: {e}"))?;
    let output = format!("GEN: {}", request.text);
    Ok(serde_json::json!({ "output": output }).to_string())
}

fn classifier_payload(body: &str) -> std::result::Result<String, String> {
    let request: ClassifyRequest =
        serde_json::from_str(body).map_err(|e| format!("bad request: {e}"))?;
    let mut results = Vec::with_capacity(request.articles.len());
    for wire in &request.articles {
        let article = Article::new(
            wire.domain.clone(),
            wire.date.clone(),
            vec![wire.authors.clone()],
            wire.title.clone(),
            wire.article.clone(),
            Label::Unknown,
        );
        let verdict = lexical_stub(&article).map_err(|e| e.to_string())?;
        results.push(WireResult { p_machine: verdict.p_machine, p_human: verdict.p_human });
    }
    Ok(serde_json::to_string(&ClassifyResponse { results }).expect("response serializes"))
}

fn respond(request: tiny_http::Request, status: u16, body: &str) {
    let response = tiny_http::Response::from_string(body)
        .with_status_code(status)
        .with_header(
            tiny_http::Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..])
                .expect("static header"),
        );
    let _ = request.respond(response);
}

/// Serves a stub on a fixed address until the process ends (the CLI `stub`
/// subcommand).
pub fn serve_forever(kind: StubKind, addr: &str, fail_first: usize) -> Result<()> {
    let server = tiny_http::Server::http(addr)
        .map_err(|e| Error::Config(format!("stub bind {addr}: {e}")))?;
    let state = StubState {
        kind,
        hits: AtomicUsize::new(0),
        fail_remaining: AtomicUsize::new(fail_first),
        requests: Mutex::new(Vec::new()),
    };
    println!("serving {:?} stub on http://{}", kind, server.server_addr());
    for request in server.incoming_requests() {
        handle(request, &state);
        // Keep the recorded bodies bounded when serving long-lived.
        let mut requests = state.requests.lock().expect("stub lock");
        if requests.len() > 1024 {
            requests.clear();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_stub_echoes_with_prefix() {
        let stub = StubServer::spawn(StubKind::Generator, 0).unwrap();
        let client = reqwest::blocking::Client::new();
        let response = client
            .post(format!("{}/generate", stub.url()))
            .body(r#"{"text":"hello"}"#)
            .send()
            .unwrap();
        assert_eq!(response.status().as_u16(), 200);
        assert_eq!(response.text().unwrap(), r#"{"output":"GEN: hello"}"#);
        assert_eq!(stub.hits(), 1);
        assert_eq!(stub.raw_requests(), vec![r#"{"text":"hello"}"#.to_string()]);
    }

    #[test]
    fn classifier_stub_speaks_the_wire_shape() {
        let stub = StubServer::spawn(StubKind::Classifier, 0).unwrap();
        let client = reqwest::blocking::Client::new();
        let body = r#"{"articles":[{"article":"abcd abcde","title":"T","authors":"A","domain":"d","date":"dt"}]}"#;
        let response = client
            .post(format!("{}/classify", stub.url()))
            .body(body)
            .send()
            .unwrap();
        assert_eq!(response.status().as_u16(), 200);
        assert_eq!(response.text().unwrap(), r#"{"results":[{"p_machine":0.5,"p_human":0.5}]}"#);
    }

    #[test]
    fn injected_failures_come_first() {
        let stub = StubServer::spawn(StubKind::Generator, 1).unwrap();
        let client = reqwest::blocking::Client::new();
        let url = format!("{}/generate", stub.url());
        let first = client.post(&url).body(r#"{"text":"x"}"#).send().unwrap();
        assert_eq!(first.status().as_u16(), 500);
        let second = client.post(&url).body(r#"{"text":"x"}"#).send().unwrap();
        assert_eq!(second.status().as_u16(), 200);
    }
}
