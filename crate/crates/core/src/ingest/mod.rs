//! Newform and elliptic-curve data: a rate-limited client for the public
//! modular-forms database, a JSON cache keyed by query hash, and the offline
//! fixture bundle shipped with the repository.

pub mod cache;
pub mod client;
pub mod fixture;

use crate::jacobian::ValidationError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

/// Weight-2 newforms with trivial character at prime levels in
/// `[level_min, level_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformQuery {
    pub level_min: u64,
    pub level_max: u64,
}

impl NewformQuery {
    pub const WEIGHT: u32 = 2;
    pub const CHAR_ORDER: u32 = 1;
    pub const FIELDS: [&'static str; 5] = ["level", "label", "dim", "fricke_eigenval", "analytic_rank"];

    pub fn new(level_min: u64, level_max: u64) -> Self {
        NewformQuery { level_min, level_max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveQuery {
    pub conductor_min: u64,
    pub conductor_max: u64,
    pub rank_min: u32,
}

impl EllipticCurveQuery {
    pub const FIELDS: [&'static str; 4] = ["lmfdb_label", "conductor", "rank", "degree"];
}

/// Stable identifier of a query: SHA-256 of its canonical form.
pub fn query_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("network error (retryable): {0}")]
    Network(String),
    #[error("server returned HTTP {status} for {url}")]
    Http { status: u16, url: String },
    #[error("malformed response from {url}: {reason}")]
    Malformed { url: String, reason: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("offline mode and no cache entry for query {0}")]
    CacheMiss(String),
    #[error("cache: {0}")]
    Cache(String),
}

impl IngestError {
    pub fn is_retryable(&self) -> bool {
        match self {
            IngestError::Network(_) => true,
            IngestError::Http { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}
