//! Command implementations behind the `x0maps` binary. Each command returns
//! its full output and exit code so that it can be driven from tests.

use crate::arith::{primes_in, Level};
use crate::density::{classify_degree, expected_degree6_infinite, DensityInputs, DensityStatus, DensityVerdict};
use crate::ingest::cache::Cache;
use crate::ingest::client::{Client, ClientConfig};
use crate::ingest::fixture::{Dataset, DatasetPaths, FixtureError};
use crate::ingest::NewformQuery;
use crate::jacobian::{check_thm13_hypothesis, classify_morphisms, LevelClassification, LevelSummary, NewformFactor};
use crate::report::{self, Format, Thm13Stats};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_MISSING_DATA: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Output of one command: text for stdout, diagnostics for stderr, exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_USAGE }
    }

    fn missing(msg: impl fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_MISSING_DATA }
    }
}

/// An inclusive range of levels, written `N` or `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for LevelRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("invalid level {t:?} in range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if lo == 0 {
            return Err("levels start at 1".into());
        }
        Ok(LevelRange { lo, hi })
    }
}

impl LevelRange {
    pub fn levels(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }

    pub fn primes(&self) -> Vec<u64> {
        primes_in(self.lo, self.hi.saturating_add(1))
    }
}

/// Where the data comes from.
#[derive(Debug, Clone, Default)]
pub struct DataOptions {
    pub data_dir: Option<PathBuf>,
    pub facts: Option<PathBuf>,
    pub kernel_data: Option<PathBuf>,
    pub offline: bool,
    pub cache_dir: Option<PathBuf>,
}

impl DataOptions {
    pub fn load(&self) -> Result<Dataset, FixtureError> {
        let dir = self.data_dir.clone().unwrap_or_else(crate::ingest::fixture::bundled_dir);
        let mut paths = DatasetPaths::in_dir(dir);
        if let Some(f) = &self.facts {
            paths.facts = f.clone();
        }
        if let Some(k) = &self.kernel_data {
            paths.kernels = k.clone();
        }
        Dataset::load(&paths)
    }

    /// Newform factors at `primes`: bundled data first, then (unless offline)
    /// the database client. Levels that cannot be obtained are returned as
    /// the error.
    fn factors(&self, ds: &Dataset, primes: &[u64]) -> Result<BTreeMap<u64, Vec<NewformFactor>>, Vec<u64>> {
        let mut out = BTreeMap::new();
        let mut missing = Vec::new();
        for &p in primes {
            match ds.factors(p) {
                Some(f) => {
                    out.insert(p, f.to_vec());
                }
                None => missing.push(p),
            }
        }
        if !missing.is_empty() && !self.offline {
            let cache = self.cache_dir.clone().map(Cache::new).or_else(Cache::from_env);
            let client = Client::new(ClientConfig::default(), cache);
            let mut still = Vec::new();
            for &p in &missing {
                match client.fetch_newforms(NewformQuery::new(p, p)) {
                    Ok(m) => out.extend(m),
                    Err(_) => still.push(p),
                }
            }
            missing = still;
        }
        if missing.is_empty() {
            Ok(out)
        } else {
            Err(missing)
        }
    }
}

fn list(v: &[u64]) -> String {
    let shown: Vec<String> = v.iter().take(20).map(u64::to_string).collect();
    if v.len() > 20 {
        format!("{} … ({} levels)", shown.join(", "), v.len())
    } else {
        shown.join(", ")
    }
}

pub fn cmd_genus(range: LevelRange, format: Format) -> Outcome {
    if range.hi < range.lo {
        return Outcome::usage(format!("empty range {}..{}", range.lo, range.hi));
    }
    let levels: Vec<Level> = range.levels().map(|n| Level::new(n).expect("n >= 1")).collect();
    Outcome { stdout: report::genus_table(&levels).render(format), stderr: String::new(), code: EXIT_OK }
}

/// Classifies every prime of the range; the exit code is 0 iff every level
/// resolves to the quotient map (or has no genus-2 targets at all).
pub fn cmd_classify_morphisms(range: LevelRange, data: &DataOptions, format: Format, show_residual: bool) -> Outcome {
    let ds = match data.load() {
        Ok(d) => d,
        Err(e) => return Outcome::missing(e),
    };
    let primes = range.primes();
    let factors = match data.factors(&ds, &primes) {
        Ok(f) => f,
        Err(missing) => return Outcome::missing(format!("no newform data for levels {}", list(&missing))),
    };
    let results: Result<Vec<LevelClassification>, _> =
        primes.par_iter().map(|p| classify_morphisms(*p, &factors[p], &ds.kernels, &ds.genus2)).collect();
    let results = match results {
        Ok(r) => r,
        Err(e) => return Outcome::missing(e),
    };

    let mut stdout = report::morphism_table(&results).render(format);
    if show_residual {
        let rows: Vec<_> = results.iter().flat_map(|c| c.residual_rows()).collect();
        stdout.push('\n');
        stdout.push_str(&report::residual_table(&rows).render(format));
    }
    let mut stderr = String::new();
    let mut code = EXIT_OK;
    for c in &results {
        match &c.summary {
            LevelSummary::Unresolved(v) => {
                stderr.push_str(&format!("p = {}: unresolved subsets {v:?}\n", c.level));
                code = EXIT_MISMATCH;
            }
            LevelSummary::MissingKernelData(v) => {
                stderr.push_str(&format!("p = {}: needs kernel data for {v:?}\n", c.level));
                if code == EXIT_OK {
                    code = EXIT_MISSING_DATA;
                }
            }
            _ => {}
        }
    }
    Outcome { stdout, stderr, code }
}

/// Degree-`d` verdicts for every prime of the range.
pub fn degree_verdicts(
    ds: &Dataset,
    primes: &[u64],
    degree: u32,
) -> Result<Vec<DensityVerdict>, crate::density::DegreeError> {
    let summaries: BTreeMap<u64, LevelSummary> = primes
        .par_iter()
        .filter_map(|&p| {
            let f = ds.factors(p)?;
            let c = classify_morphisms(p, f, &ds.kernels, &ds.genus2).ok()?;
            Some((p, c.summary))
        })
        .collect();
    primes
        .par_iter()
        .map(|&p| {
            let inp = DensityInputs { facts: &ds.facts, factors: ds.factors(p), morphisms: summaries.get(&p) };
            classify_degree(p, degree, &inp)
        })
        .collect()
}

pub fn cmd_classify_degree(
    range: LevelRange,
    degree: u32,
    data: &DataOptions,
    format: Format,
    expect_theorem17: bool,
) -> Outcome {
    if expect_theorem17 && degree != 6 {
        return Outcome::usage("--expect-theorem17 applies to degree 6 only");
    }
    let ds = match data.load() {
        Ok(d) => d,
        Err(e) => return Outcome::missing(e),
    };
    let primes = range.primes();
    let verdicts = match degree_verdicts(&ds, &primes, degree) {
        Ok(v) => v,
        Err(e) => return Outcome::usage(e),
    };
    let stdout = report::render_degree(&verdicts, format);
    let mut stderr = String::new();
    let mut code = EXIT_OK;
    if expect_theorem17 {
        let expected = expected_degree6_infinite(range.hi.saturating_add(1));
        for v in &verdicts {
            let want = if expected.contains(&v.level) { DensityStatus::Infinite } else { DensityStatus::Finite };
            if v.status != want {
                stderr.push_str(&format!("p = {}: got {}, expected {want}\n", v.level, v.status));
                code = EXIT_MISMATCH;
            }
        }
    }
    Outcome { stdout, stderr, code }
}

pub fn thm13_stats(factors: &BTreeMap<u64, Vec<NewformFactor>>) -> Thm13Stats {
    Thm13Stats {
        count: factors.values().filter(|f| check_thm13_hypothesis(f)).count() as u64,
        total: factors.len() as u64,
    }
}

pub fn cmd_thm13_stats(range: LevelRange, data: &DataOptions, format: Format) -> Outcome {
    let ds = match data.load() {
        Ok(d) => d,
        Err(e) => return Outcome::missing(e),
    };
    let primes = range.primes();
    let factors = match data.factors(&ds, &primes) {
        Ok(f) => f,
        Err(missing) => return Outcome::missing(format!("no newform data for levels {}", list(&missing))),
    };
    Outcome { stdout: thm13_stats(&factors).render(format), stderr: String::new(), code: EXIT_OK }
}
