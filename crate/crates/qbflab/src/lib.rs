//! A workbench for quantified Boolean formulas and line-based QBF proof
//! systems.
//!
//! The crate provides:
//!
//! - a core data model for prenex QCNFs, assignments, restriction and
//!   QDIMACS I/O ([`qcnf`], [`qdimacs`]);
//! - deterministic formula generators: the equality family, the Kleine
//!   Büning family with its doubled and weakened variants, and seeded random
//!   families ([`gen`]);
//! - exhaustive semantic oracles at desk scale: game truth value,
//!   winning-strategy synthesis and verification, exact cost, and
//!   polynomial-time component checks for the random family ([`oracle`]);
//! - proof representations and checkers for QU-resolution ([`qures`]),
//!   cutting planes with universal reduction ([`cp`]), polynomial calculus
//!   with resolution and universal reduction ([`pcr`]), and a semantic
//!   checker over arbitrary lines ([`semantic`]);
//! - system-generic response maps, capacity, round-based strategy
//!   extraction, and the size/cost/capacity verifier ([`line`], [`response`],
//!   [`extract`], [`scc`]);
//! - a reproducible random-formula study runner ([`study`]).
//!
//! All oracles are exhaustive and guarded by explicit caps ([`caps::Caps`]);
//! results are deterministic, with or without the `parallel` feature.

pub mod caps;
pub mod cp;
pub mod error;
mod exec;
pub mod extract;
pub mod formula;
pub mod gen;
pub mod line;
pub mod oracle;
pub mod pcr;
pub mod qcnf;
pub mod qdimacs;
pub mod qures;
pub mod response;
pub mod rng;
pub mod scc;
pub mod semantic;
pub mod study;
pub mod twosat;

pub use caps::Caps;
pub use error::{CheckKind, Error, Result};
pub use qcnf::{Assignment, Clause, Literal, Prefix, Qcnf, Quantifier, VarId};
