//! Infinitude of degree-`d` points on `X_0(p)`.
//!
//! A verdict is `Infinite` only when a constructive witness applies (a
//! degree-6 map to `P¹`, or a pullback of infinitely many lower-degree points),
//! and `Finite` only when one of the finiteness arguments applies. Each rule
//! records the facts it consumed, so a verdict can be replayed against the
//! same inputs. Missing facts never default silently: they are listed as gaps,
//! and a level with no applicable rule is `Unknown`.

use crate::arith::{genus_x0, Level};
use crate::jacobian::{LevelSummary, NewformFactor};
use crate::point_bounds::{finite_by_ogg, finiteness_threshold};
use crate::quadforms::genus_x0_plus;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Bounds on the `Q`-gonality of `X_0(p)`. The upper bound is only trusted
/// as a bound, never as the degree of an actual map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonalityBounds {
    pub lower: u64,
    pub upper: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveRecord {
    pub conductor: u64,
    pub rank: u32,
    /// Degree of the optimal modular parametrization `X_0(N) → E`.
    pub modular_degree: u64,
    pub label: String,
}

/// Conductor range in which the elliptic-curve records are complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorCoverage {
    pub conductor_min: u64,
    pub conductor_max: u64,
}

impl ConductorCoverage {
    pub fn contains(&self, n: u64) -> bool {
        self.conductor_min <= n && n <= self.conductor_max
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub level: u64,
    pub statement_id: String,
    pub source: String,
}

/// Statement a degree-6 certificate must carry: `W_6^0(X_0(p))` contains no
/// translate of a positive-rank abelian variety.
pub const W6_CERTIFICATE: &str = "W60_no_positive_rank_translate";

/// Published classifications of levels with infinitely many points of
/// degree 2, 3, 4, plus the exact quintic statement.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownDensity {
    /// `degree → levels`; a level is infinite in that degree iff listed.
    pub complete: BTreeMap<u32, BTreeSet<u64>>,
    /// Levels with infinitely many quintic points and finitely many of every
    /// degree `≤ 4`. Every other level with finitely many points of degree
    /// `≤ 4` has finitely many quintic points.
    pub quintic_only: BTreeSet<u64>,
}

impl KnownDensity {
    /// Whether `X_0(level)` has infinitely many degree-`degree` points, when
    /// the tables decide it.
    pub fn status(&self, level: u64, degree: u32) -> Option<bool> {
        match degree {
            5 => {
                if self.quintic_only.contains(&level) {
                    return Some(true);
                }
                let lower: Option<Vec<bool>> = (2..=4).map(|d| self.status(level, d)).collect();
                match lower {
                    Some(v) if v.iter().all(|x| !x) => Some(false),
                    _ => None,
                }
            }
            _ => self.complete.get(&degree).map(|s| s.contains(&level)),
        }
    }
}

/// Literature facts the degree classifier consumes, immutable once loaded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalFacts {
    pub gonality: BTreeMap<u64, GonalityBounds>,
    /// Whether `X_0^+(p)` has infinitely many cubic points.
    pub plus_cubic_infinite: BTreeMap<u64, bool>,
    pub elliptic_curves: Vec<EllipticCurveRecord>,
    pub elliptic_coverage: Option<ConductorCoverage>,
    pub certificates: Vec<Certificate>,
    pub known_density: KnownDensity,
}

impl ExternalFacts {
    /// Elliptic curves of conductor `n`, or `None` when the records do not
    /// cover `n`.
    pub fn curves_of_conductor(&self, n: u64) -> Option<Vec<&EllipticCurveRecord>> {
        if !self.elliptic_coverage.is_some_and(|c| c.contains(n)) {
            return None;
        }
        Some(self.elliptic_curves.iter().filter(|e| e.conductor == n).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    GonalityDivides,
    PlusQuotientElliptic,
    PlusCubicPullback,
    OggThreshold,
    KVGate,
    RankFilter,
    DFMinimality,
    Certificate,
    KnownTable,
}

impl RuleId {
    /// Input keys every evidence item of this rule must carry.
    pub fn required_inputs(self) -> &'static [&'static str] {
        match self {
            RuleId::GonalityDivides => &["gonality_lower", "gonality_upper"],
            RuleId::PlusQuotientElliptic => &["plus_genus"],
            RuleId::PlusCubicPullback => &["plus_cubic_infinite", "cubic_infinite"],
            RuleId::OggThreshold => &["threshold"],
            RuleId::KVGate => &["genus", "genus_bound", "gonality_lower", "small_ec", "plus_cubic_infinite", "maps"],
            RuleId::RankFilter => &["gonality_lower", "genus", "dim_cap", "ranks"],
            RuleId::DFMinimality => &[
                "genus",
                "genus_bound",
                "gonality_lower",
                "positive_rank_ec",
                "plus_cubic_infinite",
                "maps",
            ],
            RuleId::Certificate => &["statement_id", "source", "gonality_lower"],
            RuleId::KnownTable => &["degree", "infinite"],
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            RuleId::GonalityDivides => "gonal map composed with x -> x^k, then Hilbert irreducibility",
            RuleId::PlusQuotientElliptic => "X_0(p) -> X_0^+(p) = E -> P^1 of degree 2*3",
            RuleId::PlusCubicPullback => "Bars–Dalal cubic points on X_0^+(p), pulled back along the quotient",
            RuleId::OggThreshold => "Ogg's bound at q = 2 with Frey's gonality criterion: p > 120d - 24",
            RuleId::KVGate => "Kadets–Vogt dichotomy for all degrees <= 6",
            RuleId::RankFilter => "abelian varieties in W_6^0 have dim <= 3 (Debarre–Fahlaoui); analytic rank 0",
            RuleId::DFMinimality => "6-minimal curves of genus > 12 are Debarre–Fahlaoui, which map to positive-rank E",
            RuleId::Certificate => "no positive-rank translate in W_6^0 and gonality > 6",
            RuleId::KnownTable => "published classification of degree <= 5 points on X_0(N)",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceItem {
    pub rule_id: RuleId,
    pub inputs: Vec<(String, String)>,
    pub anchor: String,
}

impl EvidenceItem {
    fn new(rule_id: RuleId, inputs: Vec<(&str, String)>) -> Self {
        let item = EvidenceItem {
            rule_id,
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            anchor: rule_id.anchor().to_string(),
        };
        debug_assert!(item.has_required_inputs(), "{item:?}");
        item
    }

    pub fn has_required_inputs(&self) -> bool {
        self.rule_id.required_inputs().iter().all(|k| self.inputs.iter().any(|(key, _)| key == k))
    }

    pub fn input(&self, key: &str) -> Option<&str> {
        self.inputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DensityStatus {
    Infinite,
    Finite,
    Unknown,
}

impl fmt::Display for DensityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityVerdict {
    pub level: u64,
    pub degree: u32,
    pub status: DensityStatus,
    pub evidence: Vec<EvidenceItem>,
    /// Facts that were needed by some rule but absent.
    pub gaps: Vec<String>,
}

/// Everything the classifier may consult at one level.
#[derive(Debug, Clone, Copy)]
pub struct DensityInputs<'a> {
    pub facts: &'a ExternalFacts,
    pub factors: Option<&'a [NewformFactor]>,
    pub morphisms: Option<&'a LevelSummary>,
}

/// `(m, ε, genus bound)` of the Kadets–Vogt dichotomy in degree `d`.
pub fn kv_thresholds(d: u64) -> (u64, u64, u64) {
    assert!(d >= 1, "degree must be positive");
    let m = d.div_ceil(2) - 1;
    let eps = 3 * d - 1 - 6 * m;
    let bound = (d * (d - 1) / 2 + 1).max(3 * m * m.saturating_sub(1) + m * eps);
    (m, eps, bound)
}

/// Whether the Kadets–Vogt route can say anything Ogg's bound does not.
pub fn kv_applicable(d: u64) -> bool {
    6 * d * (d - 1) + 23 <= finiteness_threshold(d)
}

/// `(d − 1)(d − 2)/2 + 2`: genus above which a `d`-minimal curve with
/// `min δ = d` must be Debarre–Fahlaoui.
pub fn df_genus_bound(d: u64) -> u64 {
    (d - 1) * (d - 2) / 2 + 2
}

/// Largest dimension of an abelian variety inside `W_d^0`.
pub fn rank_filter_dim_cap(d: u64) -> u64 {
    d / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SmallDegreeMaps {
    /// The quotient map to `X_0^+(p)` is the only map of degree > 1 onto a
    /// curve of genus ≥ 2.
    OnlyQuotient,
    NoneExists,
}

/// Maps of degree `≤ d` from `X_0(p)` onto curves of genus `≥ 2`.
pub fn small_degree_maps(p: u64, d: u64, morphisms: Option<&LevelSummary>) -> Result<SmallDegreeMaps, String> {
    if d > 25 {
        return Err(format!("small_degree_maps covers d <= 25, got {d}"));
    }
    if p >= 3000 {
        return if finite_by_ogg(p, d) {
            Ok(SmallDegreeMaps::NoneExists)
        } else {
            Err(format!("level {p}: Ogg bound does not cover degree {d}"))
        };
    }
    match morphisms {
        Some(LevelSummary::OnlyQuotientMap) => Ok(SmallDegreeMaps::OnlyQuotient),
        Some(LevelSummary::NoGenusTwoTargets) => Ok(SmallDegreeMaps::NoneExists),
        Some(other) => Err(format!("level {p}: morphism classification unresolved ({other:?})")),
        None => Err(format!("level {p}: morphism classification")),
    }
}

/// Maps of degree `≤ d` from `X_0^+(p)` onto curves of genus `≥ 2`.
pub fn plus_small_degree_maps(p: u64, d: u64, morphisms: Option<&LevelSummary>) -> Result<SmallDegreeMaps, String> {
    if d > 12 {
        return Err(format!("plus_small_degree_maps covers d <= 12, got {d}"));
    }
    if p >= 3000 {
        return if finite_by_ogg(p, 2 * d) {
            Ok(SmallDegreeMaps::NoneExists)
        } else {
            Err(format!("level {p}: Ogg bound does not cover degree {}", 2 * d))
        };
    }
    // A map X_0^+(p) → Y composes to X_0(p) → Y; when the quotient map is
    // the only such morphism, Y ≅ X_0^+(p) and the map has degree 1.
    match morphisms {
        Some(s) if s.is_resolved() => Ok(SmallDegreeMaps::NoneExists),
        Some(other) => Err(format!("level {p}: morphism classification unresolved ({other:?})")),
        None => Err(format!("level {p}: morphism classification")),
    }
}

fn genus_of(p: u64) -> u64 {
    genus_x0(Level::new(p).expect("p >= 1"))
}

fn plus_genus_of(p: u64) -> Option<u64> {
    (p > 3).then(|| genus_x0_plus(p).ok()).flatten()
}

fn gonality(p: u64, facts: &ExternalFacts, gaps: &mut Vec<String>) -> Option<GonalityBounds> {
    let g = facts.gonality.get(&p).copied();
    if g.is_none() {
        gaps.push(format!("gonality of X_0({p})"));
    }
    g
}

fn plus_cubic(p: u64, facts: &ExternalFacts, gaps: &mut Vec<String>) -> Option<bool> {
    let v = facts.plus_cubic_infinite.get(&p).copied();
    if v.is_none() {
        gaps.push(format!("cubic points on X_0^+({p})"));
    }
    v
}

/// First applicable infinitude witness for degree-6 points.
pub fn infinitude_witness(p: u64, facts: &ExternalFacts, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    let gon = gonality(p, facts, gaps);
    if let Some(b) = gon {
        // Every gonality ≤ 3 divides 6.
        if b.upper <= 3 {
            return Some(EvidenceItem::new(
                RuleId::GonalityDivides,
                vec![("gonality_lower", b.lower.to_string()), ("gonality_upper", b.upper.to_string())],
            ));
        }
    }
    if let Some(1) = plus_genus_of(p) {
        return Some(EvidenceItem::new(RuleId::PlusQuotientElliptic, vec![("plus_genus", "1".into())]));
    }
    if let Some(b) = gon {
        if b.lower == 6 && b.upper == 6 {
            return Some(EvidenceItem::new(
                RuleId::GonalityDivides,
                vec![("gonality_lower", "6".into()), ("gonality_upper", "6".into())],
            ));
        }
    }
    let cubic = facts.known_density.status(p, 3);
    if cubic.is_none() {
        gaps.push(format!("degree-3 classification at {p}"));
    }
    if plus_cubic(p, facts, gaps) == Some(true) && cubic == Some(false) {
        return Some(EvidenceItem::new(
            RuleId::PlusCubicPullback,
            vec![("plus_cubic_infinite", "true".into()), ("cubic_infinite", "false".into())],
        ));
    }
    None
}

fn positive_rank_curves(p: u64, facts: &ExternalFacts, gaps: &mut Vec<String>) -> Option<Vec<String>> {
    match facts.curves_of_conductor(p) {
        Some(v) => Some(v.iter().filter(|e| e.rank >= 1).map(|e| e.label.clone()).collect()),
        None => {
            gaps.push(format!("elliptic curves of conductor {p}"));
            None
        }
    }
}

/// The Kadets–Vogt gate for `200 < p ≤ 696`.
pub fn finiteness_by_kv_deg6(p: u64, inp: &DensityInputs<'_>, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    if !(200 < p && p <= finiteness_threshold(6)) {
        return None;
    }
    let g = genus_of(p);
    let (_, _, bound) = kv_thresholds(6);
    if g <= bound {
        return None;
    }
    let gon = gonality(p, inp.facts, gaps)?;
    if gon.lower < 7 {
        return None;
    }
    let small_ec: Vec<String> = match inp.facts.curves_of_conductor(p) {
        Some(v) => v.iter().filter(|e| e.rank >= 1 && e.modular_degree <= 6).map(|e| e.label.clone()).collect(),
        None => {
            gaps.push(format!("elliptic curves of conductor {p}"));
            return None;
        }
    };
    if !small_ec.is_empty() {
        return None;
    }
    if plus_cubic(p, inp.facts, gaps)? {
        return None;
    }
    let maps = small_degree_maps(p, 6, inp.morphisms).map_err(|e| gaps.push(e)).ok()?;
    Some(EvidenceItem::new(
        RuleId::KVGate,
        vec![
            ("genus", g.to_string()),
            ("genus_bound", bound.to_string()),
            ("gonality_lower", gon.lower.to_string()),
            ("small_ec", "none".into()),
            ("plus_cubic_infinite", "false".into()),
            ("maps", format!("{maps:?}")),
        ],
    ))
}

/// Every factor of dimension `≤ 3` has analytic rank 0, so `W_6^0` holds no
/// positive-rank translate; with gonality `> 6` the degree-6 points are finite.
pub fn finiteness_by_rank_filter(p: u64, inp: &DensityInputs<'_>, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    let g = genus_of(p);
    if g < 7 {
        return None;
    }
    let gon = gonality(p, inp.facts, gaps)?;
    if gon.lower < 7 {
        return None;
    }
    let Some(factors) = inp.factors else {
        gaps.push(format!("newform factors at {p}"));
        return None;
    };
    let cap = rank_filter_dim_cap(6);
    let mut ranks = Vec::new();
    for f in factors.iter().filter(|f| f.dim <= cap) {
        match f.analytic_rank {
            Some(0) => ranks.push(format!("{}:0", f.label)),
            Some(_) => return None,
            None => {
                gaps.push(format!("analytic rank of {}", f.label));
                return None;
            }
        }
    }
    Some(EvidenceItem::new(
        RuleId::RankFilter,
        vec![
            ("gonality_lower", gon.lower.to_string()),
            ("genus", g.to_string()),
            ("dim_cap", cap.to_string()),
            ("ranks", if ranks.is_empty() { "none".into() } else { ranks.join(",") }),
        ],
    ))
}

/// 6-minimality plus the genus bound, for levels with no positive-rank
/// elliptic curve.
pub fn finiteness_by_df_minimality(p: u64, inp: &DensityInputs<'_>, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    let kd = &inp.facts.known_density;
    let lower: Option<Vec<bool>> = (2..=5).map(|d| kd.status(p, d)).collect();
    match lower {
        Some(v) if v.iter().all(|x| !x) => {}
        Some(_) => return None,
        None => {
            gaps.push(format!("degree <= 5 classification at {p}"));
            return None;
        }
    }
    let g = genus_of(p);
    let bound = df_genus_bound(6);
    if g <= bound {
        return None;
    }
    // Minimality against P^1: no map of degree ≤ 6 to the line.
    let gon = gonality(p, inp.facts, gaps)?;
    if gon.lower < 7 {
        return None;
    }
    if !positive_rank_curves(p, inp.facts, gaps)?.is_empty() {
        return None;
    }
    if plus_cubic(p, inp.facts, gaps)? {
        return None;
    }
    let maps = small_degree_maps(p, 6, inp.morphisms).map_err(|e| gaps.push(e)).ok()?;
    Some(EvidenceItem::new(
        RuleId::DFMinimality,
        vec![
            ("genus", g.to_string()),
            ("genus_bound", bound.to_string()),
            ("gonality_lower", gon.lower.to_string()),
            ("positive_rank_ec", "none".into()),
            ("plus_cubic_infinite", "false".into()),
            ("maps", format!("{maps:?}")),
        ],
    ))
}

fn finiteness_by_certificate(p: u64, inp: &DensityInputs<'_>, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    let cert = inp.facts.certificates.iter().find(|c| c.level == p && c.statement_id == W6_CERTIFICATE)?;
    let gon = gonality(p, inp.facts, gaps)?;
    if gon.lower < 7 {
        return None;
    }
    Some(EvidenceItem::new(
        RuleId::Certificate,
        vec![
            ("statement_id", cert.statement_id.clone()),
            ("source", cert.source.clone()),
            ("gonality_lower", gon.lower.to_string()),
        ],
    ))
}

fn known_table_infinite(p: u64, facts: &ExternalFacts) -> Option<EvidenceItem> {
    // Infinitely many points of degree 2 or 3 come from a map of that degree
    // to P^1 or to a positive-rank elliptic curve; composing with a map of
    // degree 3 or 2 gives a degree-6 map and hence degree-6 points.
    (2..=3).find(|&d| facts.known_density.status(p, d) == Some(true)).map(|d| {
        EvidenceItem::new(RuleId::KnownTable, vec![("degree", d.to_string()), ("infinite", "true".into())])
    })
}

/// First applicable finiteness rule, in the fixed order Ogg, Kadets–Vogt,
/// rank filter, minimality, certificate.
pub fn finiteness_evidence(p: u64, inp: &DensityInputs<'_>, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    if finite_by_ogg(p, 6) {
        return Some(EvidenceItem::new(RuleId::OggThreshold, vec![("threshold", finiteness_threshold(6).to_string())]));
    }
    finiteness_by_kv_deg6(p, inp, gaps)
        .or_else(|| finiteness_by_rank_filter(p, inp, gaps))
        .or_else(|| finiteness_by_df_minimality(p, inp, gaps))
        .or_else(|| finiteness_by_certificate(p, inp, gaps))
}

/// Infinitude witness, known-table short-circuit included.
pub fn infinitude_evidence(p: u64, inp: &DensityInputs<'_>, gaps: &mut Vec<String>) -> Option<EvidenceItem> {
    known_table_infinite(p, inp.facts).or_else(|| infinitude_witness(p, inp.facts, gaps))
}

/// Degree-6 classification. Both sides are evaluated; a level that receives
/// both kinds of evidence is reported as `Unknown` with a conflict gap.
pub fn classify_degree6(p: u64, inp: &DensityInputs<'_>) -> DensityVerdict {
    let mut gaps = Vec::new();
    let inf = infinitude_evidence(p, inp, &mut gaps);
    let mut fin_gaps = Vec::new();
    let fin = finiteness_evidence(p, inp, &mut fin_gaps);
    let (status, evidence) = match (inf, fin) {
        (Some(i), None) => (DensityStatus::Infinite, vec![i]),
        (None, Some(f)) => (DensityStatus::Finite, vec![f]),
        (Some(i), Some(f)) => {
            gaps.push(format!("conflict: {} and {} both apply", i.rule_id, f.rule_id));
            (DensityStatus::Unknown, vec![i, f])
        }
        (None, None) => (DensityStatus::Unknown, Vec::new()),
    };
    // Gaps from the side that did not decide are only informative; keep the
    // ones that could have changed the outcome.
    if status != DensityStatus::Finite {
        gaps.extend(fin_gaps);
    }
    if status == DensityStatus::Finite {
        gaps.clear();
    }
    gaps.sort();
    gaps.dedup();
    DensityVerdict { level: p, degree: 6, status, evidence, gaps }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error("degree must be positive")]
    Zero,
    #[error(
        "degree {0} is not supported: the Q-gonality of X_0(p) is not determined for all p \
         (already p = 163 has gonality 7 or 8)"
    )]
    Unsupported(u32),
}

/// Classifier for `1 ≤ d ≤ 6`: degrees below 6 come from the published
/// tables; degree 6 runs [`classify_degree6`].
pub fn classify_degree(p: u64, d: u32, inp: &DensityInputs<'_>) -> Result<DensityVerdict, DegreeError> {
    match d {
        0 => Err(DegreeError::Zero),
        6 => Ok(classify_degree6(p, inp)),
        1..=5 => {
            let (status, evidence, gaps) = match inp.facts.known_density.status(p, d) {
                Some(inf) => (
                    if inf { DensityStatus::Infinite } else { DensityStatus::Finite },
                    vec![EvidenceItem::new(
                        RuleId::KnownTable,
                        vec![("degree", d.to_string()), ("infinite", inf.to_string())],
                    )],
                    Vec::new(),
                ),
                None => (DensityStatus::Unknown, Vec::new(), vec![format!("degree-{d} classification at {p}")]),
            };
            Ok(DensityVerdict { level: p, degree: d, status, evidence, gaps })
        }
        _ => Err(DegreeError::Unsupported(d)),
    }
}

/// The primes below 3000 with infinitely many degree-6 points.
pub fn expected_degree6_infinite(limit: u64) -> BTreeSet<u64> {
    crate::arith::primes_in(2, limit)
        .into_iter()
        .filter(|&p| p <= 151 || [163, 167, 179, 181, 191, 227, 239, 269].contains(&p))
        .collect()
}
