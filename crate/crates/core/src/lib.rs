//! Morphisms from the prime-level modular curves `X_0(p)` to curves of genus at
//! least two, and the classification of levels with infinitely many points of
//! degree six.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact invariants of `X_0(N)` (ψ, ν₂, ν₃, cusps, genus).
//! * [`quadforms`]: class numbers of negative discriminants, analytic bounds and
//!   the genus of the Fricke quotient `X_0^+(p)`.
//! * [`interval`]: outward-rounded interval arithmetic for the transcendental
//!   inequalities.
//! * [`point_bounds`]: Ogg's point-count bound and the finiteness threshold.
//! * [`jacobian`]: newform factors of `J_0(p)`, subvariety enumeration and the
//!   morphism classifier.
//! * [`density`]: the degree-`d` point classifier with evidence chains.
//! * [`ingest`]: modular-forms database client, cache and fixture bundles.
//! * [`report`]: table emitters used by the command-line tool.
//! * [`cli`]: the commands of the `x0maps` binary.

pub mod arith;
pub mod cli;
pub mod density;
pub mod ingest;
pub mod interval;
pub mod jacobian;
pub mod point_bounds;
pub mod quadforms;
pub mod report;

pub use arith::{GenusProfile, Level};
pub use density::{DensityStatus, DensityVerdict, EvidenceItem, ExternalFacts, RuleId};
pub use ingest::fixture::Dataset;
pub use jacobian::{MorphismOutcome, MorphismVerdict, NewformFactor, SubvarietySelection};
