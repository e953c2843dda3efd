//! Database client against a local mock of the JSON API.

use serde_json::{json, Value};
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};
use x0maps::ingest::cache::Cache;
use x0maps::ingest::client::{Client, ClientConfig};
use x0maps::ingest::{EllipticCurveQuery, IngestError, NewformQuery};
use x0maps::jacobian::ValidationError;

struct Mock {
    base: String,
    hits: Arc<AtomicUsize>,
}

/// Serves `respond(path) -> (status, body)` until the test process exits.
fn mock(respond: impl Fn(&str, usize) -> (u16, String) + Send + Sync + 'static) -> Mock {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}/api", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request = String::new();
            reader.read_line(&mut request).unwrap();
            loop {
                let mut h = String::new();
                if reader.read_line(&mut h).unwrap() == 0 || h == "\r\n" {
                    break;
                }
            }
            let path = request.split_whitespace().nth(1).unwrap_or("").to_string();
            let n = counter.fetch_add(1, Ordering::SeqCst);
            let (status, body) = respond(&path, n);
            let _ = write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    Mock { base, hits }
}

fn config(base: &str) -> ClientConfig {
    ClientConfig {
        base_url: base.to_string(),
        min_interval: Duration::from_millis(20),
        max_retries: 3,
        backoff_base: Duration::from_millis(10),
        timeout: Duration::from_secs(10),
        offline: false,
    }
}

fn newform(label: &str, level: u64, dim: u64, fricke: i64, rank: Option<u64>) -> Value {
    json!({"label": label, "level": level, "dim": dim, "fricke_eigenval": fricke, "analytic_rank": rank})
}

fn page(data: Vec<Value>) -> String {
    json!({"data": data, "next": null}).to_string()
}

fn level_param(path: &str) -> u64 {
    let q = path.split('?').nth(1).unwrap();
    let v = q.split('&').find_map(|kv| kv.strip_prefix("level=i").or_else(|| kv.strip_prefix("conductor=i")));
    v.unwrap().parse().unwrap()
}

fn newforms_197() -> Vec<Value> {
    vec![
        newform("197.2.a.a", 197, 1, 1, Some(1)),
        newform("197.2.a.b", 197, 5, 1, None),
        newform("197.2.a.c", 197, 10, -1, None),
    ]
}

#[test]
fn fetch_validates_and_caches() {
    let m = mock(|path, _| match level_param(path) {
        197 => (200, page(newforms_197())),
        _ => (200, page(vec![])),
    });
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(config(&m.base), Some(Cache::new(dir.path())));
    let got = client.fetch_newforms(NewformQuery::new(197, 197)).unwrap();
    let f = &got[&197];
    let mut dims: Vec<u64> = f.iter().map(|x| x.dim).collect();
    dims.sort();
    assert_eq!(dims, [1, 5, 10]);
    assert_eq!(f.iter().filter(|x| x.dim == 1 && x.analytic_rank == Some(1)).count(), 1);
    assert_eq!(m.hits.load(Ordering::SeqCst), 1);

    // A warm cache answers without the network, with an identical payload.
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let first = std::fs::read(&files[0]).unwrap();
    let again = client.fetch_newforms(NewformQuery::new(197, 197)).unwrap();
    assert_eq!(again, got);
    assert_eq!(m.hits.load(Ordering::SeqCst), 1);
    assert_eq!(std::fs::read(&files[0]).unwrap(), first);

    let offline = Client::new(ClientConfig { offline: true, ..config(&m.base) }, Some(Cache::new(dir.path())));
    assert_eq!(offline.fetch_newforms(NewformQuery::new(197, 197)).unwrap(), got);
}

#[test]
fn level_range_and_genus_zero_levels() {
    let m = mock(|path, _| match level_param(path) {
        11 => (200, page(vec![newform("11.2.a.a", 11, 1, -1, Some(0))])),
        _ => (200, page(vec![])),
    });
    let client = Client::new(config(&m.base), None);
    let got = client.fetch_newforms(NewformQuery::new(2, 11)).unwrap();
    assert_eq!(got.keys().copied().collect::<Vec<_>>(), [2, 3, 5, 7, 11]);
    assert_eq!(got[&11].len(), 1);
    assert!(got[&7].is_empty());
}

#[test]
fn dimension_mismatch_is_rejected() {
    let m = mock(|_, _| {
        let mut v = newforms_197();
        v.pop();
        (200, page(v))
    });
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new(config(&m.base), Some(Cache::new(dir.path())));
    match client.fetch_newforms(NewformQuery::new(197, 197)) {
        Err(IngestError::Validation(ValidationError::DimensionSum { level: 197, sum: 6, genus: 16 })) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn transient_errors_are_retried_with_backoff() {
    let m = mock(|_, n| if n < 2 { (503, "{}".into()) } else { (200, page(newforms_197())) });
    let client = Client::new(config(&m.base), None);
    let t = Instant::now();
    client.fetch_newforms(NewformQuery::new(197, 197)).unwrap();
    assert_eq!(m.hits.load(Ordering::SeqCst), 3);
    assert!(t.elapsed() >= Duration::from_millis(30));

    let m = mock(|_, _| (404, "{}".into()));
    let client = Client::new(config(&m.base), None);
    assert!(matches!(client.fetch_newforms(NewformQuery::new(197, 197)), Err(IngestError::Http { status: 404, .. })));
    assert_eq!(m.hits.load(Ordering::SeqCst), 1);

    let m = mock(|_, _| (503, "{}".into()));
    let client = Client::new(config(&m.base), None);
    let e = client.fetch_newforms(NewformQuery::new(197, 197)).unwrap_err();
    assert!(e.is_retryable());
    assert_eq!(m.hits.load(Ordering::SeqCst), 4);
}

#[test]
fn pagination_and_rate_limit() {
    let m = mock(|path, _| {
        let offset: usize = path.rsplit("_offset=").next().unwrap().parse().unwrap();
        let all = newforms_197();
        let body = if offset < all.len() {
            json!({"data": [all[offset].clone()], "next": "more"}).to_string()
        } else {
            json!({"data": [], "next": null}).to_string()
        };
        (200, body)
    });
    let mut cfg = config(&m.base);
    cfg.min_interval = Duration::from_millis(50);
    let client = Client::new(cfg, None);
    let t = Instant::now();
    let got = client.fetch_newforms(NewformQuery::new(197, 197)).unwrap();
    assert_eq!(got[&197].len(), 3);
    assert_eq!(m.hits.load(Ordering::SeqCst), 4);
    assert!(t.elapsed() >= Duration::from_millis(150));
}

#[test]
fn elliptic_curve_queries() {
    let m = mock(|path, _| {
        let n = level_param(path);
        let rec = |label: &str, rank: u64, degree: u64| {
            json!({"lmfdb_label": label, "conductor": n, "rank": rank, "degree": degree})
        };
        let data = match n {
            197 => vec![rec("197.a1", 1, 10)],
            269 => vec![rec("269.a1", 1, 6)],
            211 => vec![rec("211.a1", 0, 6)],
            _ => vec![],
        };
        (200, page(data))
    });
    let client = Client::new(config(&m.base), None);
    let got = client.fetch_elliptic_curves(EllipticCurveQuery { conductor_min: 193, conductor_max: 197, rank_min: 1 }).unwrap();
    assert_eq!(got.len(), 1);
    assert_eq!((got[0].conductor, got[0].modular_degree), (197, 10));
    let none = client.fetch_elliptic_curves(EllipticCurveQuery { conductor_min: 193, conductor_max: 193, rank_min: 0 }).unwrap();
    assert!(none.is_empty());
    let small: Vec<_> = client
        .fetch_elliptic_curves(EllipticCurveQuery { conductor_min: 200, conductor_max: 300, rank_min: 1 })
        .unwrap()
        .into_iter()
        .filter(|e| e.modular_degree <= 6)
        .collect();
    assert_eq!(small.iter().map(|e| e.conductor).collect::<Vec<_>>(), [269]);
}
