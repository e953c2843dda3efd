//! Newform factors of `J_0(p)` and the classification of morphisms
//! `X_0(p) → Y` onto curves of genus at least two.
//!
//! At prime level every simple factor occurs with multiplicity one, so the
//! abelian subvarieties of `J_0(p)` are exactly the `2ⁿ` sums of subsets of
//! the `n` factors. A morphism `f` is pinned down by `A = f*(J(Y))`, and each
//! `A` is settled by one of four arguments:
//!
//! 1. the kernel exponent of the induced polarization divides `deg f`, and
//!    Riemann–Hurwitz leaves no room for it;
//! 2. Riemann–Hurwitz forces `deg f = 2`, and the Fricke involution is the
//!    only involution;
//! 3. `A` is the Fricke-plus part, where `f` is the quotient map;
//! 4. `dim A = 2` and there is no genus-2 quotient at this level.

use crate::arith::{genus_x0, Level};
use crate::quadforms::genus_x0_plus;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One simple isogeny factor of `J_0(p)`, attached to a Galois orbit of
/// weight-2 newforms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformFactor {
    pub label: String,
    pub level: u64,
    pub dim: u64,
    /// Eigenvalue of the Fricke involution `w_p`: `+1` for `J_0(p)⁺`.
    pub fricke: i8,
    /// Order of vanishing of `L(f, s)` at `s = 1`, when known.
    pub analytic_rank: Option<u32>,
}

impl NewformFactor {
    pub fn is_plus(&self) -> bool {
        self.fricke == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("level {level}: factor dimensions sum to {sum}, but X_0({level}) has genus {genus}")]
    DimensionSum { level: u64, sum: u64, genus: u64 },
    #[error("level {level}: plus-part dimensions sum to {sum}, but X_0^+({level}) has genus {expected}")]
    FrickeSum { level: u64, sum: u64, expected: u64 },
    #[error("level {level}: duplicate factor label {label}")]
    DuplicateLabel { level: u64, label: String },
    #[error("factor {label}: expected level {expected}, found {found}")]
    MixedLevels { label: String, expected: u64, found: u64 },
    #[error("factor {label}: {reason}")]
    BadFactor { label: String, reason: String },
    #[error("level {0} is not prime")]
    NotPrime(u64),
    #[error("level {level}: {count} factors exceed the enumerable limit of 63")]
    TooManyFactors { level: u64, count: usize },
}

/// Checks one level's factor list: shared prime level, distinct labels,
/// `fricke = ±1`, `Σ dim = g₀(p)`, and `Σ_{plus} dim = g₀⁺(p)`.
pub fn validate_factors(level: u64, factors: &[NewformFactor]) -> Result<(), ValidationError> {
    let lv = Level::new(level).map_err(|_| ValidationError::NotPrime(level))?;
    if !lv.is_prime() {
        return Err(ValidationError::NotPrime(level));
    }
    let mut seen = BTreeSet::new();
    for f in factors {
        if f.level != level {
            return Err(ValidationError::MixedLevels { label: f.label.clone(), expected: level, found: f.level });
        }
        if f.dim == 0 {
            return Err(ValidationError::BadFactor { label: f.label.clone(), reason: "dimension 0".into() });
        }
        if f.fricke != 1 && f.fricke != -1 {
            return Err(ValidationError::BadFactor {
                label: f.label.clone(),
                reason: format!("Fricke eigenvalue {} is not ±1", f.fricke),
            });
        }
        if !seen.insert(f.label.as_str()) {
            return Err(ValidationError::DuplicateLabel { level, label: f.label.clone() });
        }
    }
    if factors.len() > 63 {
        return Err(ValidationError::TooManyFactors { level, count: factors.len() });
    }
    let genus = genus_x0(lv);
    let sum: u64 = factors.iter().map(|f| f.dim).sum();
    if sum != genus {
        return Err(ValidationError::DimensionSum { level, sum, genus });
    }
    if level > 3 {
        let expected = genus_x0_plus(level).expect("prime > 3");
        let plus: u64 = factors.iter().filter(|f| f.is_plus()).map(|f| f.dim).sum();
        if plus != expected {
            return Err(ValidationError::FrickeSum { level, sum: plus, expected });
        }
    }
    Ok(())
}

/// An abelian subvariety `A ⊆ J_0(p)`, given as a subset of the factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubvarietySelection {
    pub level: u64,
    /// Bit `i` set iff factor `i` (in input order) is a member.
    pub mask: u64,
    /// Member labels, sorted.
    pub members: Vec<String>,
    /// `g′ = dim A`.
    pub dim_total: u64,
    /// `exp(ker φ_A)` for the polarization induced from `J_0(p)`.
    pub kernel_exponent: Option<u64>,
}

/// Streams the `2ⁿ` subsets of `factors` in increasing bitmask order.
pub struct Subvarieties<'a> {
    factors: &'a [NewformFactor],
    level: u64,
    next: u64,
    end: u64,
}

impl Iterator for Subvarieties<'_> {
    type Item = SubvarietySelection;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut members = Vec::new();
        let mut dim_total = 0;
        for (i, f) in self.factors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                members.push(f.label.clone());
                dim_total += f.dim;
            }
        }
        members.sort();
        Some(SubvarietySelection { level: self.level, mask, members, dim_total, kernel_exponent: None })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// All abelian subvarieties of `J_0(p)`, the empty and full ones included.
pub fn enumerate_subvarieties(factors: &[NewformFactor]) -> Result<Subvarieties<'_>, ValidationError> {
    let level = factors.first().map_or(0, |f| f.level);
    if let Some(f) = factors.iter().find(|f| f.level != level) {
        return Err(ValidationError::MixedLevels { label: f.label.clone(), expected: level, found: f.level });
    }
    if factors.len() > 63 {
        return Err(ValidationError::TooManyFactors { level, count: factors.len() });
    }
    Ok(Subvarieties { factors, level, next: 0, end: 1u64 << factors.len() })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("level {level}: no kernel exponent for {{{}}}", members.join(", "))]
pub struct NeedsKernelData {
    pub level: u64,
    pub members: Vec<String>,
}

fn exponent_of(sel: &SubvarietySelection) -> Result<u64, NeedsKernelData> {
    sel.kernel_exponent.ok_or_else(|| NeedsKernelData { level: sel.level, members: sel.members.clone() })
}

/// `2g − 2 < exp(ker φ_A)·(2g′ − 2)`: `A` is not `f*(J(Y))` for any curve `Y`.
pub fn not_curve_criterion(g: u64, sel: &SubvarietySelection) -> Result<bool, NeedsKernelData> {
    let e = exponent_of(sel)?;
    Ok((2 * g as u128).saturating_sub(2) < e as u128 * (2 * sel.dim_total as u128).saturating_sub(2))
}

/// `exp(ker φ_A) | deg f`.
pub fn divisibility_filter(deg_f: u64, sel: &SubvarietySelection) -> Result<bool, NeedsKernelData> {
    Ok(deg_f % exponent_of(sel)? == 0)
}

/// `⌊(2g − 2)/(2g′ − 2)⌋`, the Riemann–Hurwitz cap on `deg f`.
pub fn riemann_hurwitz_cap(g: u64, g_prime: u64) -> u64 {
    assert!(g_prime >= 2, "Riemann–Hurwitz cap needs target genus ≥ 2");
    (2 * g).saturating_sub(2) / (2 * g_prime - 2)
}

/// Degrees `d ≥ 2` allowed by both Riemann–Hurwitz and the kernel exponent.
pub fn admissible_degrees(g: u64, sel: &SubvarietySelection) -> Result<Vec<u64>, NeedsKernelData> {
    let e = exponent_of(sel)?;
    let cap = riemann_hurwitz_cap(g, sel.dim_total);
    Ok((2..=cap).filter(|d| d % e == 0).collect())
}

/// `2g − 2 < 3(2g′ − 2)`: every morphism onto a genus-`g′` curve has degree 2.
pub fn forced_degree_two(g: u64, g_prime: u64) -> bool {
    assert!(g_prime >= 2, "forced_degree_two needs g′ ≥ 2");
    (2 * g).saturating_sub(2) < 3 * (2 * g_prime - 2)
}

/// Which argument settles a candidate `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MorphismOutcome {
    RuledOutCase1KernelRH,
    RuledOutCase2OnlyFrickeInvolution,
    SurvivesQuotientMapCase3,
    RuledOutCase4Genus2Table,
    /// Not settled by the arguments above, and no kernel exponent is known.
    NeedsKernelData,
    /// The kernel exponent is known but too small, and Case 4 does not apply.
    Unresolved,
}

impl MorphismOutcome {
    pub fn is_settled(self) -> bool {
        !matches!(self, MorphismOutcome::NeedsKernelData | MorphismOutcome::Unresolved)
    }
}

impl fmt::Display for MorphismOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MorphismOutcome::RuledOutCase1KernelRH => "ruled-out/kernel-exponent",
            MorphismOutcome::RuledOutCase2OnlyFrickeInvolution => "ruled-out/degree-two",
            MorphismOutcome::SurvivesQuotientMapCase3 => "survives/quotient-map",
            MorphismOutcome::RuledOutCase4Genus2Table => "ruled-out/genus-2-table",
            MorphismOutcome::NeedsKernelData => "needs-kernel-data",
            MorphismOutcome::Unresolved => "unresolved",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismVerdict {
    pub selection: SubvarietySelection,
    pub outcome: MorphismOutcome,
    pub detail: String,
}

/// Kernel exponents keyed by level and sorted member labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelTable {
    map: BTreeMap<(u64, Vec<String>), u64>,
}

impl KernelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an exponent; `members` need not be sorted. Returns the
    /// previous value for that subset, if any.
    pub fn insert(&mut self, level: u64, mut members: Vec<String>, exponent: u64) -> Option<u64> {
        members.sort();
        self.map.insert((level, members), exponent)
    }

    pub fn get(&self, level: u64, sorted_members: &[String]) -> Option<u64> {
        self.map.get(&(level, sorted_members.to_vec())).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// All stored entries at one level.
    pub fn at_level(&self, level: u64) -> impl Iterator<Item = (&[String], u64)> {
        self.map
            .range((level, Vec::new())..)
            .take_while(move |((l, _), _)| *l == level)
            .map(|((_, m), e)| (m.as_slice(), *e))
    }
}

/// Genus-2 curves `Y` with a morphism `X_0(p) → Y` whose pullback is not the
/// Fricke-plus part, as listed by the published tables of new modular curves
/// of genus 2. The list is complete for levels below `coverage`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genus2QuotientTable {
    pub coverage: u64,
    pub quotients: BTreeSet<(u64, Vec<String>)>,
}

impl Genus2QuotientTable {
    /// A table asserting that no level below `coverage` has such a quotient.
    pub fn empty_below(coverage: u64) -> Self {
        Genus2QuotientTable { coverage, quotients: BTreeSet::new() }
    }

    pub fn insert(&mut self, level: u64, mut members: Vec<String>) -> bool {
        members.sort();
        self.quotients.insert((level, members))
    }

    /// Whether the table rules out a genus-2 curve realizing `members`.
    pub fn excludes(&self, level: u64, sorted_members: &[String]) -> bool {
        level < self.coverage && !self.quotients.contains(&(level, sorted_members.to_vec()))
    }
}

/// The verdict for a whole level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LevelSummary {
    /// `X_0(p) → X_0^+(p)` is the only morphism of degree > 1 onto a curve of
    /// genus ≥ 2.
    OnlyQuotientMap,
    /// No morphism of degree > 1 onto a curve of genus ≥ 2 exists at all
    /// (`X_0^+(p)` has genus ≤ 1).
    NoGenusTwoTargets,
    /// Some subsets could not be settled for lack of kernel exponents.
    MissingKernelData(Vec<Vec<String>>),
    /// Some subsets survive every available argument.
    Unresolved(Vec<Vec<String>>),
}

impl LevelSummary {
    pub fn is_resolved(&self) -> bool {
        matches!(self, LevelSummary::OnlyQuotientMap | LevelSummary::NoGenusTwoTargets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelClassification {
    pub level: u64,
    pub genus: u64,
    pub plus_genus: u64,
    /// One verdict per subset with `2 ≤ dim A < g`, in bitmask order.
    pub verdicts: Vec<MorphismVerdict>,
    pub summary: LevelSummary,
}

/// One row of the table of candidates that only the genus-2 tables rule out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualRow {
    pub p: u64,
    pub g: u64,
    pub g_plus: u64,
    pub g_prime: u64,
    pub exponent: Option<u64>,
    pub rh_bound: u64,
}

impl LevelClassification {
    pub fn residual_rows(&self) -> Vec<ResidualRow> {
        self.verdicts
            .iter()
            .filter(|v| v.outcome == MorphismOutcome::RuledOutCase4Genus2Table)
            .map(|v| ResidualRow {
                p: self.level,
                g: self.genus,
                g_plus: self.plus_genus,
                g_prime: v.selection.dim_total,
                exponent: v.selection.kernel_exponent,
                rh_bound: riemann_hurwitz_cap(self.genus, v.selection.dim_total),
            })
            .collect()
    }
}

fn classify_one(
    p: u64,
    g: u64,
    plus_mask: u64,
    sel: &SubvarietySelection,
    table: &Genus2QuotientTable,
) -> (MorphismOutcome, String) {
    let gp = sel.dim_total;
    if sel.mask == plus_mask {
        return (
            MorphismOutcome::SurvivesQuotientMapCase3,
            format!("A is the Fricke-plus part (dim {gp}); f is the quotient map to X_0^+({p})"),
        );
    }
    if forced_degree_two(g, gp) {
        let why = if p == 37 {
            "the involution quotients of X_0(37) are P^1 and two elliptic curves".to_string()
        } else {
            format!("w_{p} is the only involution of X_0({p}), and A is not the plus part")
        };
        return (
            MorphismOutcome::RuledOutCase2OnlyFrickeInvolution,
            format!("2g-2 = {} < 3(2g'-2) = {} forces deg f = 2; {why}", 2 * g - 2, 3 * (2 * gp - 2)),
        );
    }
    if let Some(e) = sel.kernel_exponent {
        if not_curve_criterion(g, sel).expect("exponent present") {
            return (
                MorphismOutcome::RuledOutCase1KernelRH,
                format!("2g-2 = {} < exp·(2g'-2) = {e}·{}", 2 * g - 2, 2 * gp - 2),
            );
        }
    }
    if gp == 2 && table.excludes(p, &sel.members) {
        return (
            MorphismOutcome::RuledOutCase4Genus2Table,
            format!("g' = 2 and X_0({p}) has no genus-2 quotient"),
        );
    }
    match sel.kernel_exponent {
        None => (MorphismOutcome::NeedsKernelData, "kernel exponent required".into()),
        Some(e) => (
            MorphismOutcome::Unresolved,
            format!(
                "exp = {e} admits deg f ∈ {:?}, and no genus-2 table entry applies",
                admissible_degrees(g, sel).expect("exponent present")
            ),
        ),
    }
}

/// Classifies every candidate `A ⊆ J_0(p)` with `2 ≤ dim A < g`.
///
/// The empty subvariety and those of dimension 1 have no genus-≥2 curve
/// behind them, and `A = J_0(p)` forces `deg f = 1`, so those subsets are
/// enumerated but not classified.
pub fn classify_morphisms(
    p: u64,
    factors: &[NewformFactor],
    kernels: &KernelTable,
    table: &Genus2QuotientTable,
) -> Result<LevelClassification, ValidationError> {
    validate_factors(p, factors)?;
    let g = genus_x0(Level::new(p).expect("validated"));
    let plus_genus = if p > 3 { genus_x0_plus(p).expect("prime > 3") } else { 0 };
    let plus_mask = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_plus())
        .fold(0u64, |m, (i, _)| m | 1 << i);
    let full = if factors.is_empty() { 0 } else { u64::MAX >> (64 - factors.len()) };

    let mut verdicts = Vec::new();
    for mut sel in enumerate_subvarieties(factors)? {
        if sel.dim_total < 2 || sel.mask == full {
            continue;
        }
        sel.kernel_exponent = kernels.get(p, &sel.members);
        let (outcome, detail) = classify_one(p, g, plus_mask, &sel, table);
        verdicts.push(MorphismVerdict { selection: sel, outcome, detail });
    }

    let pending = |o: MorphismOutcome| -> Vec<Vec<String>> {
        verdicts.iter().filter(|v| v.outcome == o).map(|v| v.selection.members.clone()).collect()
    };
    let missing = pending(MorphismOutcome::NeedsKernelData);
    let unresolved = pending(MorphismOutcome::Unresolved);
    let survivors = verdicts.iter().filter(|v| v.outcome == MorphismOutcome::SurvivesQuotientMapCase3).count();
    let summary = if !unresolved.is_empty() {
        LevelSummary::Unresolved(unresolved)
    } else if !missing.is_empty() {
        LevelSummary::MissingKernelData(missing)
    } else if survivors == 1 {
        LevelSummary::OnlyQuotientMap
    } else {
        LevelSummary::NoGenusTwoTargets
    };
    Ok(LevelClassification { level: p, genus: g, plus_genus, verdicts, summary })
}

/// Whether `J_0(p) ~ A⁺ ⊕ A⁻ ⊕ A` with `A^±` simple in `J_0(p)^±` and
/// `dim A ≤ 2`.
///
/// Removing one plus and one minus factor, the remainder is smallest when the
/// largest of each sign is removed. A sign with no factors contributes
/// nothing.
pub fn check_thm13_hypothesis(factors: &[NewformFactor]) -> bool {
    let total: u64 = factors.iter().map(|f| f.dim).sum();
    let largest = |plus: bool| factors.iter().filter(|f| f.is_plus() == plus).map(|f| f.dim).max().unwrap_or(0);
    total - largest(true) - largest(false) <= 2
}
