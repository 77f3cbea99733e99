//! Tooling for structured experimental action sequences: parsing and
//! canonicalization of two text dialects, string- and structure-level
//! scoring, action-type matching, distribution-based data selection,
//! multi-judge review orchestration, and corpus utilities.
//!
//! The crate is organized by concern:
//!
//! * [`schema`] — dialects, the action-sequence grammar, parser,
//!   canonical serializer, and validity checking.
//! * [`metrics`] — pairwise and corpus-level text/structure metrics
//!   (edit similarity, n-gram overlap, exact match, sequence match).
//! * [`typematch`] — greedy phrase matching between predicted and
//!   annotated sequences, confusion matrices, per-type recall.
//! * [`select`] — 2D projection, histogram densities, KL divergence,
//!   and the divergence-gated batch selection loop.
//! * [`review`] — embedding-based token scoring and a multi-round
//!   debate orchestrator over HTTP judge endpoints, with a bundled
//!   deterministic mock judge server for offline runs.
//! * [`datatools`] — JSONL corpus loading, QA-pair construction,
//!   seeded splits, and corpus statistics.

mod gestalt;

pub mod datatools;
pub mod metrics;
pub mod review;
pub mod schema;
pub mod select;
pub mod typematch;

pub use schema::{ActionSequence, Dialect};
