//! Rate-limited HTTP client for the public modular-forms database API.
//!
//! Requests are serialized through a shared clock (at most one per
//! `min_interval`), retried with exponential backoff on transient failures,
//! and every completed query is written to the cache. Offline mode answers
//! from the cache only.

use super::cache::Cache;
use super::{query_hash, EllipticCurveQuery, IngestError, NewformQuery};
use crate::arith::primes_in;
use crate::density::EllipticCurveRecord;
use crate::jacobian::{validate_factors, NewformFactor};
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::Mutex;
use std::thread::sleep;
use std::time::{Duration, Instant};

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org/api";

#[derive(Debug, Clone)]
pub struct ClientConfig {
    pub base_url: String,
    pub min_interval: Duration,
    pub max_retries: u32,
    pub backoff_base: Duration,
    pub timeout: Duration,
    pub offline: bool,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            base_url: DEFAULT_BASE_URL.to_string(),
            min_interval: Duration::from_secs(1),
            max_retries: 5,
            backoff_base: Duration::from_secs(2),
            timeout: Duration::from_secs(60),
            offline: false,
        }
    }
}

pub struct Client {
    config: ClientConfig,
    cache: Option<Cache>,
    agent: ureq::Agent,
    last_request: Mutex<Option<Instant>>,
}

impl Client {
    pub fn new(config: ClientConfig, cache: Option<Cache>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Client { config, cache, agent, last_request: Mutex::new(None) }
    }

    fn throttle(&self) {
        let mut last = self.last_request.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = *last {
            let ready = t + self.config.min_interval;
            let now = Instant::now();
            if ready > now {
                sleep(ready - now);
            }
        }
        *last = Some(Instant::now());
    }

    fn get_once(&self, url: &str) -> Result<Value, IngestError> {
        self.throttle();
        let mut resp = self.agent.get(url).call().map_err(|e| IngestError::Network(e.to_string()))?;
        let status = resp.status().as_u16();
        if status != 200 {
            return Err(IngestError::Http { status, url: url.to_string() });
        }
        let body = resp.body_mut().read_to_string().map_err(|e| IngestError::Network(e.to_string()))?;
        serde_json::from_str(&body).map_err(|e| IngestError::Malformed { url: url.to_string(), reason: e.to_string() })
    }

    fn get_json(&self, url: &str) -> Result<Value, IngestError> {
        let mut attempt = 0;
        loop {
            match self.get_once(url) {
                Err(e) if e.is_retryable() && attempt < self.config.max_retries => {
                    sleep(self.config.backoff_base * 2u32.pow(attempt));
                    attempt += 1;
                }
                other => return other,
            }
        }
    }

    /// All records of a paginated API query.
    fn get_all(&self, path_and_query: &str) -> Result<Vec<Value>, IngestError> {
        let mut out = Vec::new();
        loop {
            let url = format!("{}/{}&_offset={}", self.config.base_url, path_and_query, out.len());
            let page = self.get_json(&url)?;
            let data = page
                .get("data")
                .and_then(Value::as_array)
                .ok_or_else(|| IngestError::Malformed { url: url.clone(), reason: "missing data array".into() })?;
            out.extend(data.iter().cloned());
            if data.is_empty() || page.get("next").is_none_or(Value::is_null) {
                return Ok(out);
            }
        }
    }

    /// Cached-or-fetched payload for a query made of one request per level.
    fn payload(&self, canonical: &str, levels: &[u64], path: impl Fn(u64) -> String) -> Result<Vec<Value>, IngestError> {
        let hash = query_hash(canonical);
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.get(&hash)? {
                return Ok(entry.payload);
            }
        }
        if self.config.offline {
            return Err(IngestError::CacheMiss(canonical.to_string()));
        }
        let mut payload = Vec::new();
        for &n in levels {
            payload.extend(self.get_all(&path(n))?);
        }
        if let Some(cache) = &self.cache {
            cache.put(&hash, canonical, payload.clone())?;
        }
        Ok(payload)
    }

    /// Newform factors at every prime level of the query, each level
    /// validated against the genus before it is returned.
    pub fn fetch_newforms(&self, q: NewformQuery) -> Result<BTreeMap<u64, Vec<NewformFactor>>, IngestError> {
        let fields = NewformQuery::FIELDS.join(",");
        let canonical = format!(
            "mf_newforms?level_is_prime&level=[{},{}]&weight={}&char_order={}&fields={fields}",
            q.level_min,
            q.level_max,
            NewformQuery::WEIGHT,
            NewformQuery::CHAR_ORDER
        );
        let levels = primes_in(q.level_min, q.level_max.saturating_add(1));
        let payload = self.payload(&canonical, &levels, |p| {
            format!(
                "mf_newforms/?level=i{p}&weight=i{}&char_order=i{}&_format=json&_fields={fields}",
                NewformQuery::WEIGHT,
                NewformQuery::CHAR_ORDER
            )
        })?;
        let mut by_level: BTreeMap<u64, Vec<NewformFactor>> = levels.iter().map(|&p| (p, Vec::new())).collect();
        for rec in &payload {
            let f = parse_newform(rec)?;
            match by_level.get_mut(&f.level) {
                Some(v) => v.push(f),
                None => {
                    return Err(IngestError::Malformed {
                        url: canonical.clone(),
                        reason: format!("record {} outside the requested levels", f.label),
                    })
                }
            }
        }
        for (p, factors) in by_level.iter_mut() {
            factors.sort_by(|a, b| label_key(&a.label).cmp(&label_key(&b.label)));
            validate_factors(*p, factors)?;
        }
        Ok(by_level)
    }

    /// Elliptic curves of prime conductor in range with rank at least
    /// `rank_min`, sorted by label.
    pub fn fetch_elliptic_curves(&self, q: EllipticCurveQuery) -> Result<Vec<EllipticCurveRecord>, IngestError> {
        let fields = EllipticCurveQuery::FIELDS.join(",");
        let canonical = format!("ec_curvedata?conductor=[{},{}]&fields={fields}", q.conductor_min, q.conductor_max);
        let levels = primes_in(q.conductor_min, q.conductor_max.saturating_add(1));
        let payload = self.payload(&canonical, &levels, |n| {
            format!("ec_curvedata/?conductor=i{n}&_format=json&_fields={fields}")
        })?;
        let mut out = payload.iter().map(parse_curve).collect::<Result<Vec<_>, _>>()?;
        out.retain(|e| e.rank >= q.rank_min);
        out.sort_by(|a, b| (a.conductor, &a.label).cmp(&(b.conductor, &b.label)));
        Ok(out)
    }
}

fn malformed(rec: &Value, reason: &str) -> IngestError {
    IngestError::Malformed { url: rec.to_string(), reason: reason.to_string() }
}

fn field_u64(rec: &Value, key: &str) -> Result<u64, IngestError> {
    rec.get(key).and_then(Value::as_u64).ok_or_else(|| malformed(rec, &format!("field {key}")))
}

pub fn parse_newform(rec: &Value) -> Result<NewformFactor, IngestError> {
    let label = rec.get("label").and_then(Value::as_str).ok_or_else(|| malformed(rec, "field label"))?;
    let fricke = rec
        .get("fricke_eigenval")
        .and_then(Value::as_i64)
        .filter(|s| s.abs() == 1)
        .ok_or_else(|| malformed(rec, "field fricke_eigenval"))?;
    let analytic_rank = match rec.get("analytic_rank") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().and_then(|r| u32::try_from(r).ok()).ok_or_else(|| malformed(rec, "field analytic_rank"))?),
    };
    Ok(NewformFactor {
        label: label.to_string(),
        level: field_u64(rec, "level")?,
        dim: field_u64(rec, "dim")?,
        fricke: fricke as i8,
        analytic_rank,
    })
}

pub fn parse_curve(rec: &Value) -> Result<EllipticCurveRecord, IngestError> {
    let label = rec.get("lmfdb_label").and_then(Value::as_str).ok_or_else(|| malformed(rec, "field lmfdb_label"))?;
    let rank = u32::try_from(field_u64(rec, "rank")?).map_err(|_| malformed(rec, "field rank"))?;
    let modular_degree = field_u64(rec, "degree")?;
    if modular_degree == 0 {
        return Err(malformed(rec, "modular degree 0"));
    }
    Ok(EllipticCurveRecord { conductor: field_u64(rec, "conductor")?, rank, modular_degree, label: label.to_string() })
}

/// Orders labels such as `p.2.a.z` before `p.2.a.ba`.
pub fn label_key(label: &str) -> (usize, &str) {
    let suffix = label.rsplit('.').next().unwrap_or(label);
    (suffix.len(), suffix)
}
