//! The offline bundle: newform factors, kernel exponents, the genus-2
//! quotient table and the literature facts.
//!
//! Newform and kernel files are JSON Lines so that a schema error can name
//! the offending record by line. Every level's factor list passes
//! [`validate_factors`] during loading; a bundle that fails never yields a
//! [`Dataset`].

use super::SCHEMA_VERSION;
use crate::density::ExternalFacts;
use crate::jacobian::{validate_factors, Genus2QuotientTable, KernelTable, NewformFactor, ValidationError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// Location of the bundle shipped with the repository.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub file: PathBuf,
    /// One-based line for JSON Lines files, 0 for whole-file documents.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: {}", self.file.display(), self.line, self.message)
        } else {
            write!(f, "{}: {}", self.file.display(), self.message)
        }
    }
}

impl std::error::Error for SchemaError {}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("schema error: {0}")]
    Schema(#[from] SchemaError),
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRecord {
    pub label: String,
    pub dim: u64,
    pub fricke: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_rank: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRecord {
    pub level: u64,
    pub factors: Vec<FactorRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelRecord {
    pub level: u64,
    pub members: Vec<String>,
    pub exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactsFile {
    pub schema_version: String,
    pub facts: ExternalFacts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genus2File {
    pub schema_version: String,
    #[serde(flatten)]
    pub table: Genus2QuotientTable,
}

/// Paths of the four bundle files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub newforms: PathBuf,
    pub kernels: PathBuf,
    pub genus2: PathBuf,
    pub facts: PathBuf,
}

impl DatasetPaths {
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let d = dir.as_ref();
        DatasetPaths {
            newforms: d.join("newforms.jsonl"),
            kernels: d.join("kernels.jsonl"),
            genus2: d.join("genus2.json"),
            facts: d.join("facts.json"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub newforms: BTreeMap<u64, Vec<NewformFactor>>,
    pub kernels: KernelTable,
    pub genus2: Genus2QuotientTable,
    pub facts: ExternalFacts,
}

fn read(path: &Path) -> Result<String, FixtureError> {
    fs::read_to_string(path).map_err(|source| FixtureError::Io { path: path.to_path_buf(), source })
}

fn schema(file: &Path, line: usize, message: impl Into<String>) -> SchemaError {
    SchemaError { file: file.to_path_buf(), line, message: message.into() }
}

fn check_version(file: &Path, v: &str) -> Result<(), SchemaError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(schema(file, 0, format!("schema_version {v:?}, expected {SCHEMA_VERSION:?}")))
    }
}

/// JSON Lines records, each tagged with its line number.
fn jsonl<T: for<'de> Deserialize<'de>>(file: &Path, text: &str) -> Result<Vec<(usize, T)>, SchemaError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(line).map_err(|e| schema(file, i + 1, e.to_string()))?;
        out.push((i + 1, rec));
    }
    Ok(out)
}

/// Parses the newform file without validating it against the genus.
pub fn parse_newforms(file: &Path, text: &str) -> Result<BTreeMap<u64, Vec<NewformFactor>>, SchemaError> {
    let mut out = BTreeMap::new();
    for (line, rec) in jsonl::<LevelRecord>(file, text)? {
        let factors = rec
            .factors
            .into_iter()
            .map(|f| NewformFactor {
                label: f.label,
                level: rec.level,
                dim: f.dim,
                fricke: f.fricke,
                analytic_rank: f.analytic_rank,
            })
            .collect();
        if out.insert(rec.level, factors).is_some() {
            return Err(schema(file, line, format!("level {} listed twice", rec.level)));
        }
    }
    Ok(out)
}

pub fn parse_kernels(file: &Path, text: &str) -> Result<KernelTable, SchemaError> {
    let mut t = KernelTable::new();
    for (line, rec) in jsonl::<KernelRecord>(file, text)? {
        if rec.exponent == 0 || rec.members.is_empty() {
            return Err(schema(file, line, "exponent and members must be nonempty"));
        }
        if let Some(bad) = rec.members.iter().find(|m| !m.starts_with(&format!("{}.", rec.level))) {
            return Err(schema(file, line, format!("member {bad} is not at level {}", rec.level)));
        }
        if t.insert(rec.level, rec.members, rec.exponent).is_some() {
            return Err(schema(file, line, "subset listed twice"));
        }
    }
    Ok(t)
}

pub fn parse_facts(file: &Path, text: &str) -> Result<ExternalFacts, SchemaError> {
    let f: FactsFile = serde_json::from_str(text).map_err(|e| schema(file, 0, e.to_string()))?;
    check_version(file, &f.schema_version)?;
    for (p, b) in &f.facts.gonality {
        if b.lower > b.upper {
            return Err(schema(file, 0, format!("gonality bounds for {p} are inverted")));
        }
    }
    Ok(f.facts)
}

pub fn parse_genus2(file: &Path, text: &str) -> Result<Genus2QuotientTable, SchemaError> {
    let f: Genus2File = serde_json::from_str(text).map_err(|e| schema(file, 0, e.to_string()))?;
    check_version(file, &f.schema_version)?;
    Ok(f.table)
}

impl Dataset {
    /// The bundle shipped with the repository.
    pub fn bundled() -> Result<Self, FixtureError> {
        Self::load(&DatasetPaths::in_dir(bundled_dir()))
    }

    pub fn load(paths: &DatasetPaths) -> Result<Self, FixtureError> {
        let newforms = parse_newforms(&paths.newforms, &read(&paths.newforms)?)?;
        for (p, factors) in &newforms {
            validate_factors(*p, factors)?;
        }
        Ok(Dataset {
            newforms,
            kernels: parse_kernels(&paths.kernels, &read(&paths.kernels)?)?,
            genus2: parse_genus2(&paths.genus2, &read(&paths.genus2)?)?,
            facts: parse_facts(&paths.facts, &read(&paths.facts)?)?,
        })
    }

    pub fn factors(&self, p: u64) -> Option<&[NewformFactor]> {
        self.newforms.get(&p).map(Vec::as_slice)
    }
}
