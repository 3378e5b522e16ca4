use std::time::Duration;

use serde::Deserialize;

use super::{Embedder, Embedding, EmbeddingSource, EvalError};
use crate::imagecore::{encode_png, Image};

#[derive(Deserialize)]
struct EmbedReply {
    embedding: Vec<f64>,
    dim: usize,
    model: String,
}

/// Reply of `GET /healthz`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct Health {
    pub status: String,
    pub model: String,
}

fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .build()
        .into()
}

fn url_for(endpoint: &str, path: &str) -> String {
    format!("{}/{path}", endpoint.trim_end_matches('/'))
}

fn map_err(url: &str, err: ureq::Error) -> EvalError {
    match err {
        ureq::Error::Timeout(_) => EvalError::Timeout { url: url.into() },
        ureq::Error::Io(e) if matches!(e.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) => {
            EvalError::Timeout { url: url.into() }
        }
        other => EvalError::Transport {
            url: url.into(),
            reason: other.to_string(),
        },
    }
}

fn read_json<T: serde::de::DeserializeOwned>(url: &str, mut resp: ureq::http::Response<ureq::Body>) -> Result<T, EvalError> {
    let status = resp.status().as_u16();
    if status != 200 {
        return Err(EvalError::Status { url: url.into(), status });
    }
    let text = resp.body_mut().read_to_string().map_err(|e| map_err(url, e))?;
    serde_json::from_str(&text).map_err(|e| EvalError::Malformed {
        url: url.into(),
        reason: e.to_string(),
    })
}

/// POSTs the image as PNG to `{endpoint}/embed` and returns the
/// re-normalized vector. One attempt only; `timeout` bounds the whole
/// exchange.
pub fn embed_remote(endpoint: &str, img: &Image, timeout: Duration) -> Result<Embedding, EvalError> {
    let url = url_for(endpoint, "embed");
    let body = encode_png(img)?;
    let resp = agent(timeout)
        .post(&url)
        .header("content-type", "image/png")
        .send(&body[..])
        .map_err(|e| map_err(&url, e))?;
    let reply: EmbedReply = read_json(&url, resp)?;
    if reply.embedding.len() != reply.dim {
        return Err(EvalError::DeclaredDim {
            declared: reply.dim,
            found: reply.embedding.len(),
        });
    }
    Embedding::normalized(reply.embedding, EmbeddingSource::Remote(reply.model)).map_err(|_| EvalError::Malformed {
        url,
        reason: "embedding is zero or non-finite".into(),
    })
}

/// `GET {endpoint}/healthz`.
pub fn remote_health(endpoint: &str, timeout: Duration) -> Result<Health, EvalError> {
    let url = url_for(endpoint, "healthz");
    let resp = agent(timeout).get(&url).call().map_err(|e| map_err(&url, e))?;
    read_json(&url, resp)
}

#[derive(Clone, Debug)]
pub struct RemoteEmbedder {
    pub endpoint: String,
    pub timeout: Duration,
}

impl Embedder for RemoteEmbedder {
    fn embed(&self, img: &Image) -> Result<Embedding, EvalError> {
        embed_remote(&self.endpoint, img, self.timeout)
    }

    fn tag(&self) -> String {
        format!("remote({})", self.endpoint)
    }
}
