//! Deterministic table emitters: Markdown, CSV and JSON.

use crate::arith::{GenusProfile, Level};
use crate::density::DensityVerdict;
use crate::jacobian::{LevelClassification, LevelSummary, ResidualRow};
use crate::quadforms::genus_x0_plus;
use serde_json::{json, Map, Value};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Md,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "md" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected md, csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Md => "md",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// A table with a fixed column schema; rows are emitted in the given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_markdown(&self) -> String {
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        let mut s = line(&self.headers);
        s.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for r in &self.rows {
            s.push_str(&line(r));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> =
                    self.headers.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect();
                Value::Object(m)
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Md => self.to_markdown(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn genus_table(levels: &[Level]) -> Table {
    let mut t = Table::new(&["N", "psi", "nu2", "nu3", "nu_inf", "g0", "g0_plus"]);
    for &l in levels {
        let g = GenusProfile::of(l);
        let plus = if l.is_prime() && l.get() > 3 {
            genus_x0_plus(l.get()).map(|v| v.to_string()).unwrap_or_default()
        } else {
            String::new()
        };
        t.push(vec![
            l.get().to_string(),
            g.psi.to_string(),
            g.nu2.to_string(),
            g.nu3.to_string(),
            g.nu_inf.to_string(),
            g.genus.to_string(),
            plus,
        ]);
    }
    t
}

/// Candidates settled only by the genus-2 tables, in the column order
/// `p, g, g(X_0^+(p)), g' = dim A, exp(ker φ_A), ⌊(2g−2)/(2g'−2)⌋`.
pub fn residual_table(rows: &[ResidualRow]) -> Table {
    let mut t = Table::new(&["p", "g", "g(X_0^+(p))", "g' = dim A", "exp(ker phi_A)", "floor((2g-2)/(2g'-2))"]);
    let mut rows = rows.to_vec();
    rows.sort_by_key(|r| (r.p, r.g_prime, r.exponent));
    for r in rows {
        t.push(vec![
            r.p.to_string(),
            r.g.to_string(),
            r.g_plus.to_string(),
            r.g_prime.to_string(),
            r.exponent.map(|e| e.to_string()).unwrap_or_else(|| "?".into()),
            r.rh_bound.to_string(),
        ]);
    }
    t
}

fn summary_text(s: &LevelSummary) -> String {
    let list = |v: &[Vec<String>]| v.iter().map(|m| format!("{{{}}}", m.join(","))).collect::<Vec<_>>().join(" ");
    match s {
        LevelSummary::OnlyQuotientMap => "only-quotient-map".into(),
        LevelSummary::NoGenusTwoTargets => "no-genus-2-targets".into(),
        LevelSummary::MissingKernelData(v) => format!("needs-kernel-data {}", list(v)),
        LevelSummary::Unresolved(v) => format!("unresolved {}", list(v)),
    }
}

pub fn morphism_table(levels: &[LevelClassification]) -> Table {
    let mut t = Table::new(&["p", "g", "g_plus", "subsets", "case1", "case2", "case3", "case4", "verdict"]);
    for c in levels {
        let count = |o| c.verdicts.iter().filter(|v| v.outcome == o).count().to_string();
        use crate::jacobian::MorphismOutcome as M;
        t.push(vec![
            c.level.to_string(),
            c.genus.to_string(),
            c.plus_genus.to_string(),
            c.verdicts.len().to_string(),
            count(M::RuledOutCase1KernelRH),
            count(M::RuledOutCase2OnlyFrickeInvolution),
            count(M::SurvivesQuotientMapCase3),
            count(M::RuledOutCase4Genus2Table),
            summary_text(&c.summary),
        ]);
    }
    t
}

fn evidence_text(v: &DensityVerdict) -> String {
    v.evidence
        .iter()
        .map(|e| {
            let inputs = e.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            format!("{}({inputs})", e.rule_id)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn degree_table(verdicts: &[DensityVerdict]) -> Table {
    let mut t = Table::new(&["p", "d", "status", "evidence", "gaps"]);
    for v in verdicts {
        t.push(vec![
            v.level.to_string(),
            v.degree.to_string(),
            v.status.to_string(),
            evidence_text(v),
            v.gaps.join("; "),
        ]);
    }
    t
}

/// Degree verdicts; JSON embeds the evidence chain with anchors verbatim.
pub fn render_degree(verdicts: &[DensityVerdict], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(verdicts).expect("serializable") + "\n",
        _ => degree_table(verdicts).render(format),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm13Stats {
    pub count: u64,
    pub total: u64,
}

impl Thm13Stats {
    /// Percentage with two decimals, computed in integers; `0/0` prints as
    /// `0.00`.
    pub fn percentage(&self) -> String {
        if self.total == 0 {
            return "0.00".into();
        }
        let hundredths = (self.count as u128 * 10_000 + self.total as u128 / 2) / self.total as u128;
        format!("{}.{:02}", hundredths / 100, hundredths % 100)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(&json!({"count": self.count, "total": self.total, "percentage": self.percentage()}))
                    .expect("serializable")
                    + "\n"
            }
            _ => {
                let mut t = Table::new(&["count", "total", "percentage"]);
                t.push(vec![self.count.to_string(), self.total.to_string(), self.percentage()]);
                t.render(format)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_layout() {
        let rows = [ResidualRow { p: 223, g: 18, g_plus: 6, g_prime: 2, exponent: Some(14), rh_bound: 17 }];
        let md = residual_table(&rows).to_markdown();
        assert_eq!(
            md,
            "| p | g | g(X_0^+(p)) | g' = dim A | exp(ker phi_A) | floor((2g-2)/(2g'-2)) |\n\
             |---|---|---|---|---|---|\n\
             | 223 | 18 | 6 | 2 | 14 | 17 |\n"
        );
    }

    #[test]
    fn csv_quotes_and_json_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x, y".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,\"x, y\"\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["b"], "x, y");
    }

    #[test]
    fn genus_rows() {
        let t = genus_table(&[Level::new(223).unwrap(), Level::new(12).unwrap()]);
        assert_eq!(t.rows[0], ["223", "224", "0", "2", "2", "18", "6"]);
        assert_eq!(t.rows[1][6], "");
    }

    #[test]
    fn percentages() {
        assert_eq!(Thm13Stats { count: 77636, total: 78498 }.percentage(), "98.90");
        assert_eq!(Thm13Stats { count: 0, total: 0 }.percentage(), "0.00");
        assert_eq!(Thm13Stats { count: 1, total: 3 }.percentage(), "33.33");
        assert_eq!("md".parse::<Format>(), Ok(Format::Md));
        assert!("xml".parse::<Format>().is_err());
    }
}
